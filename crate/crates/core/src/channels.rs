//! Single-qubit Kraus channels and their uniform application to every qubit
//! of a register.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::collective::{pauli, Axis};
use crate::error::{QfiError, Result};
use crate::matcore::{ComplexMatrix, ONE, ZERO};
use crate::states::DensityMatrix;

/// Completeness tolerance for `Σ E†E = I`.
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    Custom,
}

impl ChannelKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "dpc",
            ChannelKind::AmplitudeDamping => "adc",
            ChannelKind::PhaseDamping => "pdc",
            ChannelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Clone, Debug)]
pub struct KrausChannel {
    kind: ChannelKind,
    strength: f64,
    operators: Vec<ComplexMatrix>,
}

fn check_strength(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QfiError::InvalidArgument(format!(
            "channel strength p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl KrausChannel {
    /// `E0 = √(1-3p/4) I`, `E1..3 = √(p/4) σ_{x,y,z}`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_strength(p)?;
        let side = (p / 4.0).sqrt();
        Ok(Self {
            kind: ChannelKind::Depolarizing,
            strength: p,
            operators: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt()),
                pauli(Axis::X).scale_real(side),
                pauli(Axis::Y).scale_real(side),
                pauli(Axis::Z).scale_real(side),
            ],
        })
    }

    /// Decay `|1⟩ → |0⟩` with probability `p`.
    pub fn amplitude_damping(p: f64) -> Result<Self> {
        check_strength(p)?;
        Ok(Self {
            kind: ChannelKind::AmplitudeDamping,
            strength: p,
            operators: vec![
                ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, real((1.0 - p).sqrt())]]),
                ComplexMatrix::from_rows(&[[ZERO, real(p.sqrt())], [ZERO, ZERO]]),
            ],
        })
    }

    /// `E0 = √(1-p) I`, `E1 = √p |0⟩⟨0|`, `E2 = √p |1⟩⟨1|`.
    pub fn phase_damping(p: f64) -> Result<Self> {
        check_strength(p)?;
        let sp = real(p.sqrt());
        Ok(Self {
            kind: ChannelKind::PhaseDamping,
            strength: p,
            operators: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                ComplexMatrix::from_rows(&[[sp, ZERO], [ZERO, ZERO]]),
                ComplexMatrix::from_rows(&[[ZERO, ZERO], [ZERO, sp]]),
            ],
        })
    }

    pub fn of_kind(kind: ChannelKind, p: f64) -> Result<Self> {
        match kind {
            ChannelKind::Depolarizing => Self::depolarizing(p),
            ChannelKind::AmplitudeDamping => Self::amplitude_damping(p),
            ChannelKind::PhaseDamping => Self::phase_damping(p),
            ChannelKind::Custom => Err(QfiError::InvalidArgument(
                "custom channels need explicit operators".into(),
            )),
        }
    }

    /// User-supplied 2×2 operators, taken as-is (strength 1). Not validated
    /// here; see [`KrausChannel::validate`].
    pub fn custom(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(QfiError::InvalidArgument("channel has no operators".into()));
        }
        if let Some(bad) = operators.iter().find(|e| e.dim() != (2, 2)) {
            return Err(QfiError::InvalidArgument(format!(
                "Kraus operator has shape {:?}, expected 2x2",
                bad.dim()
            )));
        }
        Ok(Self {
            kind: ChannelKind::Custom,
            strength: 1.0,
            operators,
        })
    }

    /// `(1-p)·id + p·E`, as the Kraus set `{√(1-p) I} ∪ {√p E_μ}`.
    pub fn custom_mixture(operators: &[ComplexMatrix], p: f64) -> Result<Self> {
        check_strength(p)?;
        let base = Self::custom(operators.to_vec())?;
        let mut ops = Vec::with_capacity(base.operators.len() + 1);
        ops.push(ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()));
        ops.extend(base.operators.iter().map(|e| e.scale_real(p.sqrt())));
        Ok(Self {
            kind: ChannelKind::Custom,
            strength: p,
            operators: ops,
        })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// Largest entry of `|Σ E†E − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for e in &self.operators {
            let term = e.adjoint().matmul(e).expect("2x2 operators");
            sum.add_scaled_assign(&term, ONE).expect("2x2 operators");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
            .expect("2x2 operators")
    }

    /// Checks completeness; returns the max deviation when it holds.
    pub fn validate(&self) -> Result<f64> {
        let deviation = self.completeness_deviation();
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(QfiError::ChannelViolation { deviation });
        }
        Ok(deviation)
    }

    /// `ρ ↦ Σ_μ E_μ ρ E_μ†` on a single qubit.
    pub fn apply_single(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(2, 2);
        for e in &self.operators {
            out.add_scaled_assign(&rho.conjugate_by(e)?, ONE)?;
        }
        Ok(out)
    }

    /// Applies the channel on `qubit` only (qubit 0 = most significant bit).
    pub fn apply_on_qubit(&self, rho: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
        let dim = rho.rows();
        let n_qubits = dim.trailing_zeros() as usize;
        let shift = n_qubits - 1 - qubit;
        let mask = 1usize << shift;
        let mut out = ComplexMatrix::zeros(dim, dim);
        for e in &self.operators {
            let e_conj = [
                [e[(0, 0)].conj(), e[(0, 1)].conj()],
                [e[(1, 0)].conj(), e[(1, 1)].conj()],
            ];
            for i in 0..dim {
                let bi = (i >> shift) & 1;
                let i0 = i & !mask;
                for j in 0..dim {
                    let bj = (j >> shift) & 1;
                    let j0 = j & !mask;
                    let mut acc = ZERO;
                    for a in 0..2 {
                        let ea = e[(bi, a)];
                        if ea == ZERO {
                            continue;
                        }
                        let row = i0 | (a << shift);
                        for b in 0..2 {
                            let eb = e_conj[bj][b];
                            if eb == ZERO {
                                continue;
                            }
                            acc += ea * rho[(row, j0 | (b << shift))] * eb;
                        }
                    }
                    out[(i, j)] += acc;
                }
            }
        }
        out
    }

    /// The channel applied independently to every qubit of `rho`.
    pub fn apply_uniform(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.validate()?;
        let mut m = rho.matrix().clone();
        for q in 0..rho.n_qubits() {
            m = self.apply_on_qubit(&m, q);
        }
        Ok(DensityMatrix::new_unchecked(m))
    }
}

pub fn apply_uniform(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    ch.apply_uniform(rho)
}

/// `p = 1 − exp(−γt/2)`.
pub fn damping_rate_to_p(gamma: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(t >= 0.0) {
        return Err(QfiError::InvalidArgument(format!(
            "damping rate {gamma} and time {t} must be nonnegative"
        )));
    }
    Ok(-(-gamma * t / 2.0).exp_m1())
}

/// Reads custom Kraus operators: one 2×2 block per operator, blocks
/// separated by blank lines, each row written as `re,im re,im`. Lines
/// starting with `#` are ignored.
pub fn parse_kraus_text(text: &str) -> std::result::Result<Vec<ComplexMatrix>, String> {
    let mut ops = Vec::new();
    let mut rows: Vec<[Complex64; 2]> = Vec::new();
    let mut flush =
        |rows: &mut Vec<[Complex64; 2]>, line_no: usize| -> std::result::Result<(), String> {
            if rows.is_empty() {
                return Ok(());
            }
            if rows.len() != 2 {
                return Err(format!(
                    "block ending at line {line_no} has {} rows, expected 2",
                    rows.len()
                ));
            }
            ops.push(ComplexMatrix::from_rows(rows));
            rows.clear();
            Ok(())
        };
    let mut last = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last = line_no;
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut rows, line_no)?;
            continue;
        }
        let entries: Vec<Complex64> = line
            .split_whitespace()
            .map(|tok| {
                let (re, im) = tok
                    .split_once(',')
                    .ok_or_else(|| format!("line {line_no}: entry {tok:?} is not re,im"))?;
                let re: f64 = re
                    .trim()
                    .parse()
                    .map_err(|e| format!("line {line_no}: {e}"))?;
                let im: f64 = im
                    .trim()
                    .parse()
                    .map_err(|e| format!("line {line_no}: {e}"))?;
                Ok(Complex64::new(re, im))
            })
            .collect::<std::result::Result<_, String>>()?;
        match entries.as_slice() {
            [a, b] => rows.push([*a, *b]),
            _ => {
                return Err(format!(
                    "line {line_no}: expected 2 entries, found {}",
                    entries.len()
                ))
            }
        }
    }
    flush(&mut rows, last)?;
    if ops.is_empty() {
        return Err("no operators found".into());
    }
    Ok(ops)
}

pub fn read_kraus_file(path: &Path) -> Result<Vec<ComplexMatrix>> {
    let text = std::fs::read_to_string(path).map_err(|e| QfiError::io(path, e))?;
    parse_kraus_text(&text).map_err(|reason| QfiError::Parse {
        path: path.to_path_buf(),
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{hermitian_eig, is_psd};
    use crate::states::{density_from_pure, w_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn builtin_channels(p: f64) -> [KrausChannel; 3] {
        [
            KrausChannel::depolarizing(p).unwrap(),
            KrausChannel::amplitude_damping(p).unwrap(),
            KrausChannel::phase_damping(p).unwrap(),
        ]
    }

    fn random_density(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let dim = 1 << n_qubits;
        let g = ComplexMatrix::from_vec(
            dim,
            dim,
            (0..dim * dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap();
        let m = g.matmul(&g.adjoint()).unwrap();
        let tr = m.trace().unwrap().re;
        DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
    }

    // Σ over all Kraus strings E_{μ1}⊗…⊗E_{μN}.
    fn brute_force_uniform(rho: &ComplexMatrix, ch: &KrausChannel, n: usize) -> ComplexMatrix {
        let ops = ch.operators();
        let k = ops.len();
        let dim = 1 << n;
        let mut out = ComplexMatrix::zeros(dim, dim);
        for code in 0..k.pow(n as u32) {
            let mut c = code;
            let mut string = ComplexMatrix::identity(1);
            for _ in 0..n {
                string = string.kron(&ops[c % k]);
                c /= k;
            }
            out.add_scaled_assign(&rho.conjugate_by(&string).unwrap(), ONE)
                .unwrap();
        }
        out
    }

    #[test]
    fn depolarizing_basics() {
        let ch = KrausChannel::depolarizing(0.0).unwrap();
        assert_eq!(ch.operators()[0], ComplexMatrix::identity(2));
        assert!(ch.operators()[1..].iter().all(|e| e.max_abs() == 0.0));

        let full = KrausChannel::depolarizing(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(1, &mut rng);
        let out = full.apply_single(rho.matrix()).unwrap();
        assert!(
            out.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5))
                .unwrap()
                < 1e-15
        );

        for p in [0.0, 0.37, 1.0] {
            assert!(
                KrausChannel::depolarizing(p)
                    .unwrap()
                    .completeness_deviation()
                    <= 1e-14
            );
        }
    }

    #[test]
    fn strength_out_of_range() {
        for p in [-0.1, 1.1, f64::NAN] {
            assert!(KrausChannel::depolarizing(p).is_err());
            assert!(KrausChannel::amplitude_damping(p).is_err());
            assert!(KrausChannel::phase_damping(p).is_err());
        }
    }

    #[test]
    fn amplitude_damping_basics() {
        let id = KrausChannel::amplitude_damping(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random_density(1, &mut rng);
        assert!(
            id.apply_single(rho.matrix())
                .unwrap()
                .max_abs_diff(rho.matrix())
                .unwrap()
                < 1e-15
        );

        let full = KrausChannel::amplitude_damping(1.0).unwrap();
        let one = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let zero = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert_eq!(full.apply_single(&one).unwrap(), zero);
    }

    #[test]
    fn adc_on_w3_matches_expansion() {
        // (1-p)|W⟩⟨W| + p|000⟩⟨000|
        let w = density_from_pure(&w_state(3).unwrap());
        for p in [0.0, 0.1, 0.3, 0.77, 1.0] {
            let out = KrausChannel::amplitude_damping(p)
                .unwrap()
                .apply_uniform(&w)
                .unwrap();
            let mut expected = w.matrix().scale_real(1.0 - p);
            expected[(0, 0)] += Complex64::new(p, 0.0);
            assert!(out.matrix().max_abs_diff(&expected).unwrap() <= 1e-12);
        }
        let out = KrausChannel::amplitude_damping(0.3)
            .unwrap()
            .apply_uniform(&w)
            .unwrap();
        let eig = hermitian_eig(out.matrix()).unwrap();
        assert!((eig.eigenvalues[0] - 0.7).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 0.3).abs() < 1e-12);
        assert!(eig.eigenvalues[2..].iter().all(|l| l.abs() < 1e-12));
        assert!((out.purity() - 0.58).abs() < 1e-12);
    }

    #[test]
    fn phase_damping_on_w3_spectrum_and_populations() {
        let w = density_from_pure(&w_state(3).unwrap());
        let p: f64 = 0.4;
        let out = KrausChannel::phase_damping(p)
            .unwrap()
            .apply_uniform(&w)
            .unwrap();
        let eig = hermitian_eig(out.matrix()).unwrap();
        let small = (2.0 * p - p * p) / 3.0;
        let big = (3.0 - 4.0 * p + 2.0 * p * p) / 3.0;
        assert!((eig.eigenvalues[0] - big).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - small).abs() < 1e-12);
        assert!((eig.eigenvalues[2] - small).abs() < 1e-12);
        assert!(eig.eigenvalues[3..].iter().all(|l| l.abs() < 1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let rho = random_density(3, &mut rng);
            let q: f64 = rng.gen();
            let out = KrausChannel::phase_damping(q)
                .unwrap()
                .apply_uniform(&rho)
                .unwrap();
            for i in 0..8 {
                assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn depolarizing_full_strength_on_w3() {
        let w = density_from_pure(&w_state(3).unwrap());
        let out = KrausChannel::depolarizing(1.0)
            .unwrap()
            .apply_uniform(&w)
            .unwrap();
        assert!(
            out.matrix()
                .max_abs_diff(&ComplexMatrix::identity(8).scale_real(0.125))
                .unwrap()
                < 1e-14
        );
    }

    #[test]
    fn validation_reports() {
        for p in [0.0, 0.5, 1.0] {
            for ch in builtin_channels(p) {
                assert!(ch.validate().is_ok());
            }
        }
        let half = KrausChannel::custom(vec![ComplexMatrix::identity(2).scale_real(0.5f64.sqrt())])
            .unwrap();
        match half.validate() {
            Err(QfiError::ChannelViolation { deviation }) => {
                assert!((deviation - 0.5).abs() < 1e-12)
            }
            other => panic!("expected violation, got {other:?}"),
        }
        let w = density_from_pure(&w_state(3).unwrap());
        assert!(half.apply_uniform(&w).is_err());

        let projective = KrausChannel::custom(vec![
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
        ])
        .unwrap();
        assert!(projective.validate().is_ok());
        assert!(KrausChannel::custom(vec![]).is_err());
        assert!(KrausChannel::custom(vec![ComplexMatrix::identity(4)]).is_err());
    }

    #[test]
    fn custom_mixture_interpolates() {
        let flip = vec![pauli(Axis::X)];
        let ch = KrausChannel::custom_mixture(&flip, 0.25).unwrap();
        ch.validate().unwrap();
        let zero = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let out = ch.apply_single(&zero).unwrap();
        assert!(
            out.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25]))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn damping_rate_conversion() {
        assert_eq!(damping_rate_to_p(1.0, 0.0).unwrap(), 0.0);
        assert!((damping_rate_to_p(1.0, 1e6).unwrap() - 1.0).abs() < 1e-15);
        // 1 − e⁻¹
        assert!((damping_rate_to_p(2.0, 1.0).unwrap() - 0.632_120_558_828_557_7).abs() < 1e-15);
        assert!(damping_rate_to_p(-1.0, 1.0).is_err());
        assert!(damping_rate_to_p(1.0, -1.0).is_err());
    }

    #[test]
    fn per_qubit_matches_kraus_string_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for _ in 0..3 {
                let rho = random_density(n, &mut rng);
                let p: f64 = rng.gen();
                for ch in builtin_channels(p) {
                    let fast = ch.apply_uniform(&rho).unwrap();
                    let slow = brute_force_uniform(rho.matrix(), &ch, n);
                    assert!(fast.matrix().max_abs_diff(&slow).unwrap() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn commutes_with_jz_on_w_states() {
        for n in 2..=4 {
            let jz = crate::collective::collective_operator(n, crate::collective::Direction::z())
                .unwrap();
            let w = density_from_pure(&w_state(n).unwrap());
            for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
                for ch in builtin_channels(p) {
                    let out = ch.apply_uniform(&w).unwrap();
                    let comm = out.matrix().commutator(&jz).unwrap();
                    assert!(comm.frobenius_norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn kraus_text_parsing() {
        let text = "# bit flip at 10%\n0.9486832980505138,0 0,0\n0,0 0.9486832980505138,0\n\n0,0 0.31622776601683794,0\n0.31622776601683794,0 0,0\n";
        let ops = parse_kraus_text(text).unwrap();
        assert_eq!(ops.len(), 2);
        let ch = KrausChannel::custom(ops).unwrap();
        assert!(ch.validate().is_ok());

        assert!(parse_kraus_text("").is_err());
        assert!(parse_kraus_text("1,0 0,0\n").is_err());
        assert!(parse_kraus_text("1,0 0,0 0,0\n0,0 1,0\n").is_err());
        assert!(parse_kraus_text("1;0 0,0\n0,0 1,0\n").is_err());
        assert!(parse_kraus_text("a,0 0,0\n0,0 1,0\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn prop_trace_and_positivity(seed in proptest::prelude::any::<u64>(), p in 0.0f64..=1.0, n in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density(n, &mut rng);
            for ch in builtin_channels(p) {
                let out = ch.apply_uniform(&rho).unwrap();
                let tr = out.matrix().trace().unwrap();
                proptest::prop_assert!((tr.re - 1.0).abs() <= 1e-10 && tr.im.abs() <= 1e-10);
                proptest::prop_assert!(is_psd(out.matrix(), 1e-9).unwrap());
            }
        }
    }
}
