//! Pure multiqubit states (W, GHZ, Dicke, product) and density matrices.
//!
//! Basis ordering: qubit 0 is the most significant bit of the basis index,
//! and `|0⟩` is the `σ_z = +1` state. An "excitation" is a qubit in `|1⟩`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{QfiError, Result};
use crate::matcore::{hermitian_eig, ComplexMatrix, ZERO};

pub const NORM_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// Largest register accepted by the dense kernel.
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(QfiError::InvalidArgument(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QfiError::InvalidArgument(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

fn check_register(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_QUBITS {
        return Err(QfiError::InvalidArgument(format!(
            "register size {n} outside {min}..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Equal superposition of all basis states with exactly `k` excitations.
pub fn dicke_state(n: usize, k: usize) -> Result<PureState> {
    check_register(n, 1)?;
    if k > n {
        return Err(QfiError::InvalidArgument(format!(
            "Dicke excitation number {k} exceeds {n} qubits"
        )));
    }
    let dim = 1usize << n;
    let count = (0..dim).filter(|i| i.count_ones() as usize == k).count();
    let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
    let amplitudes = (0..dim)
        .map(|i| {
            if i.count_ones() as usize == k {
                amp
            } else {
                ZERO
            }
        })
        .collect();
    Ok(PureState {
        n_qubits: n,
        amplitudes,
    })
}

/// `(|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n`.
pub fn w_state(n: usize) -> Result<PureState> {
    check_register(n, 2)?;
    dicke_state(n, 1)
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<PureState> {
    check_register(n, 2)?;
    let dim = 1usize << n;
    let mut amplitudes = vec![ZERO; dim];
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = amp;
    amplitudes[dim - 1] = amp;
    Ok(PureState {
        n_qubits: n,
        amplitudes,
    })
}

pub fn product_state_all_zero(n: usize) -> Result<PureState> {
    check_register(n, 1)?;
    dicke_state(n, 0)
}

/// Trace-one, Hermitian, positive-semidefinite matrix on `n_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rows = matrix.rows();
        if !matrix.is_square() || !rows.is_power_of_two() {
            return Err(QfiError::InvalidDensity(format!(
                "shape {:?} is not a 2^N square",
                matrix.dim()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > crate::matcore::HERMITIAN_TOL {
            return Err(QfiError::InvalidDensity(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = matrix.trace()?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(QfiError::InvalidDensity(format!(
                "trace {tr} differs from 1"
            )));
        }
        let min = hermitian_eig(&matrix)?
            .eigenvalues
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(QfiError::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self::new_unchecked(matrix))
    }

    /// Wraps a matrix produced by a trusted map (CPTP channel, unitary).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.rows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits, 1)?;
        let dim = 1usize << n_qubits;
        Ok(Self::new_unchecked(
            ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(ρ²)`, computed without forming the product.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes))
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// State selector used by the CLI: `w`, `ghz`, `dicke:k`, `zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSpec {
    W,
    Ghz,
    Dicke(usize),
    Zero,
}

impl StateSpec {
    pub fn build(self, n_qubits: usize) -> Result<PureState> {
        match self {
            StateSpec::W => w_state(n_qubits),
            StateSpec::Ghz => ghz_state(n_qubits),
            StateSpec::Dicke(k) => dicke_state(n_qubits, k),
            StateSpec::Zero => product_state_all_zero(n_qubits),
        }
    }
}

impl FromStr for StateSpec {
    type Err = QfiError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "w" => Ok(StateSpec::W),
            "ghz" => Ok(StateSpec::Ghz),
            "zero" => Ok(StateSpec::Zero),
            _ => match s.strip_prefix("dicke:") {
                Some(k) => k.parse().map(StateSpec::Dicke).map_err(|_| {
                    QfiError::InvalidArgument(format!("bad Dicke excitation in {s:?}"))
                }),
                None => Err(QfiError::InvalidArgument(format!(
                    "unknown state {s:?} (expected w, ghz, dicke:k or zero)"
                ))),
            },
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::W => f.write_str("w"),
            StateSpec::Ghz => f.write_str("ghz"),
            StateSpec::Dicke(k) => write!(f, "dicke:{k}"),
            StateSpec::Zero => f.write_str("zero"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn w3_amplitudes() {
        let w = w_state(3).unwrap();
        let a = 1.0 / 3f64.sqrt();
        // |100⟩ = 4, |010⟩ = 2, |001⟩ = 1
        let expected: Vec<Complex64> = (0..8)
            .map(|i| if [1, 2, 4].contains(&i) { amp(a) } else { ZERO })
            .collect();
        assert_eq!(w.amplitudes().len(), 8);
        for (x, y) in w.amplitudes().iter().zip(&expected) {
            assert!((x - y).norm() < 1e-15);
        }
        let norm: f64 = w.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w2_and_ghz3() {
        let w = w_state(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (x, y) in w.amplitudes().iter().zip([ZERO, amp(h), amp(h), ZERO]) {
            assert!((x - y).norm() < 1e-15);
        }

        let g = ghz_state(3).unwrap();
        assert_eq!(g.amplitudes()[0], amp(h));
        assert_eq!(g.amplitudes()[7], amp(h));
        assert!((density_from_pure(&g).purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_errors() {
        assert!(w_state(1).is_err());
        assert!(ghz_state(1).is_err());
        assert!(dicke_state(3, 4).is_err());
        assert!(w_state(MAX_QUBITS + 1).is_err());
        assert!(PureState::new(1, vec![amp(1.0), amp(1.0)]).is_err());
        assert!(PureState::new(2, vec![amp(1.0), ZERO]).is_err());
    }

    #[test]
    fn dicke_special_cases() {
        assert_eq!(dicke_state(3, 1).unwrap(), w_state(3).unwrap());
        let z = dicke_state(3, 0).unwrap();
        assert_eq!(z.amplitudes()[0], amp(1.0));
        assert!(z.amplitudes()[1..].iter().all(|a| *a == ZERO));
        assert_eq!(z, product_state_all_zero(3).unwrap());
        let d42 = dicke_state(4, 2).unwrap();
        let nz = d42.amplitudes().iter().filter(|a| a.norm() > 0.0).count();
        assert_eq!(nz, 6);
    }

    #[test]
    fn density_from_w3_is_rank_one() {
        let rho = density_from_pure(&w_state(3).unwrap());
        assert!((rho.matrix().trace().unwrap().re - 1.0).abs() < 1e-15);
        let eig = hermitian_eig(rho.matrix()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(eig.eigenvalues[1..].iter().all(|l| l.abs() < 1e-12));
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn purity_of_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((rho.purity() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn density_validation_rejects() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.1, -0.1])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }

    fn permute_qubits(psi: &[Complex64], n: usize, perm: &[usize]) -> Vec<Complex64> {
        let mut out = vec![ZERO; psi.len()];
        for (i, &a) in psi.iter().enumerate() {
            let mut j = 0;
            for q in 0..n {
                let bit = (i >> (n - 1 - q)) & 1;
                j |= bit << (n - 1 - perm[q]);
            }
            out[j] = a;
        }
        out
    }

    #[test]
    fn w_state_is_permutation_symmetric() {
        for n in 2..=4 {
            let w = w_state(n).unwrap();
            let rho = density_from_pure(&w);
            let mut perm: Vec<usize> = (0..n).collect();
            for shift in 1..n {
                perm.rotate_left(1);
                let p = permute_qubits(w.amplitudes(), n, &perm);
                let rho_p = ComplexMatrix::outer(&p, &p);
                assert!(
                    rho_p.max_abs_diff(rho.matrix()).unwrap() <= 1e-12,
                    "shift {shift}"
                );
            }
            perm.swap(0, n - 1);
            let p = permute_qubits(w.amplitudes(), n, &perm);
            assert!(
                ComplexMatrix::outer(&p, &p)
                    .max_abs_diff(rho.matrix())
                    .unwrap()
                    <= 1e-12
            );
        }
    }

    #[test]
    fn every_constructor_yields_valid_density() {
        for n in 2..=4 {
            let states = [
                w_state(n).unwrap(),
                ghz_state(n).unwrap(),
                product_state_all_zero(n).unwrap(),
                dicke_state(n, n / 2).unwrap(),
            ];
            for s in &states {
                DensityMatrix::new(density_from_pure(s).into_matrix()).unwrap();
            }
        }
    }

    #[test]
    fn state_spec_parsing() {
        assert_eq!("w".parse::<StateSpec>().unwrap(), StateSpec::W);
        assert_eq!("dicke:2".parse::<StateSpec>().unwrap(), StateSpec::Dicke(2));
        assert!("dicke:x".parse::<StateSpec>().is_err());
        assert!("noon".parse::<StateSpec>().is_err());
        assert_eq!(StateSpec::Dicke(2).to_string(), "dicke:2");
    }
}
