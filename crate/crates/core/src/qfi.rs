//! Quantum Fisher information for SU(2) rotations.
//!
//! The directional sensitivity matrix is
//!
//! ```text
//! C_kl = Σ_{i≠j} (λ_i − λ_j)² / (λ_i + λ_j) · 2 Re(⟨i|J_k|j⟩⟨j|J_l|i⟩)
//! ```
//!
//! over the eigenpairs `(λ_i, |i⟩)` of ρ. Its largest eigenvalue is the
//! maximal QFI over rotation axes; dividing by N gives the mean QFI.
//!
//! For rank-deficient ρ the pair sum is ambiguous, so the set of admitted
//! pairs is an explicit [`SummationMode`]:
//!
//! * `FullSpectrum` admits every pair with `λ_i + λ_j > ε`. This is the
//!   usual QFI and is continuous in the channel strength.
//! * `PaperSupport` admits only pairs with both eigenvalues in the support
//!   (`λ > ε`), falling back to `FullSpectrum` for rank-one states. This
//!   produces the piecewise W-state curves (sudden drop under amplitude
//!   damping, sudden death under phase damping).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::collective::{collective_axes, collective_operator, Direction};
use crate::error::{QfiError, Result};
use crate::matcore::{
    hermitian_eig, singular_values, unitary_evolution, ComplexMatrix, HermitianEigen,
};
use crate::states::{DensityMatrix, PureState};

pub const DEFAULT_EPSILON: f64 = 1e-10;

/// Largest C eigenvalue still treated as exactly zero.
pub const QFI_FLOOR: f64 = 1e-12;

/// Tolerance used when classifying mean QFI against the N=1 and N limits.
pub const CLASSIFY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummationMode {
    /// Support-only pairs; listed first so that paper rows sort first.
    PaperSupport,
    FullSpectrum,
}

impl SummationMode {
    pub fn label(self) -> &'static str {
        match self {
            SummationMode::PaperSupport => "paper",
            SummationMode::FullSpectrum => "full",
        }
    }
}

impl fmt::Display for SummationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SummationMode {
    type Err = QfiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" | "paper_support" => Ok(SummationMode::PaperSupport),
            "full" | "full_spectrum" => Ok(SummationMode::FullSpectrum),
            other => Err(QfiError::InvalidArgument(format!(
                "unknown summation mode {other:?} (expected paper or full)"
            ))),
        }
    }
}

/// Real symmetric 3×3 matrix of directional phase sensitivities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix(pub [[f64; 3]; 3]);

impl CMatrix {
    pub fn zero() -> Self {
        CMatrix([[0.0; 3]; 3])
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.0[k][l]
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.0[0][0], self.0[1][1], self.0[2][2]]
    }

    pub fn max_off_diagonal(&self) -> f64 {
        [self.0[0][1], self.0[0][2], self.0[1][2]]
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    /// `nᵀ C n`.
    pub fn quadratic_form(&self, d: Direction) -> f64 {
        let n = d.components();
        (0..3)
            .flat_map(|k| (0..3).map(move |l| (k, l)))
            .map(|(k, l)| n[k] * self.0[k][l] * n[l])
            .sum()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = ComplexMatrix::from_rows(&self.0.map(|row| row.map(|x| Complex64::new(x, 0.0))));
        let eig = hermitian_eig(&m).expect("C is symmetric by construction");
        [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    BelowShotNoise,
    ShotNoise,
    UsefulEntangled,
    Heisenberg,
}

impl Classification {
    pub fn of(mean_f: f64, n_qubits: usize) -> Self {
        let n = n_qubits as f64;
        if n_qubits > 1 && (mean_f - n).abs() <= CLASSIFY_TOL {
            Classification::Heisenberg
        } else if (mean_f - 1.0).abs() <= CLASSIFY_TOL {
            Classification::ShotNoise
        } else if mean_f < 1.0 {
            Classification::BelowShotNoise
        } else {
            Classification::UsefulEntangled
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Classification::BelowShotNoise => "below_shot_noise",
            Classification::ShotNoise => "shot_noise",
            Classification::UsefulEntangled => "useful_entangled",
            Classification::Heisenberg => "heisenberg",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QfiResult {
    pub c_matrix: CMatrix,
    pub c_max: f64,
    pub f_max: f64,
    pub mean_f: f64,
    pub n_qubits: usize,
    pub mode: SummationMode,
    pub epsilon: f64,
    pub classification: Classification,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(QfiError::InvalidArgument(format!(
            "support tolerance must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// C matrix from a precomputed eigendecomposition of ρ.
///
/// Any orthonormal basis inside a degenerate eigenspace gives the same
/// result.
pub fn c_matrix_from_eigen(
    eig: &HermitianEigen,
    n_qubits: usize,
    mode: SummationMode,
    epsilon: f64,
) -> Result<CMatrix> {
    check_epsilon(epsilon)?;
    let dim = eig.dim();
    if dim != 1 << n_qubits {
        return Err(QfiError::InvalidArgument(format!(
            "{dim} eigenpairs for {n_qubits} qubits"
        )));
    }
    let lambdas: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < epsilon { 0.0 } else { l })
        .collect();
    let rank = lambdas.iter().filter(|&&l| l > 0.0).count();
    let support_only = mode == SummationMode::PaperSupport && rank > 1;

    let v = &eig.eigenvectors;
    let v_adj = v.adjoint();
    let rotated: Vec<ComplexMatrix> = collective_axes(n_qubits)?
        .iter()
        .map(|j| v_adj.matmul(j)?.matmul(v))
        .collect::<Result<_>>()?;

    let mut c = [[0.0; 3]; 3];
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let (li, lj) = (lambdas[i], lambdas[j]);
            let denom = li + lj;
            if denom <= epsilon {
                continue;
            }
            if support_only && (li == 0.0 || lj == 0.0) {
                continue;
            }
            let weight = (li - lj) * (li - lj) / denom;
            if weight == 0.0 {
                continue;
            }
            let elems = [rotated[0][(i, j)], rotated[1][(i, j)], rotated[2][(i, j)]];
            for k in 0..3 {
                for l in k..3 {
                    c[k][l] += weight * 2.0 * (elems[k] * elems[l].conj()).re;
                }
            }
        }
    }
    for k in 0..3 {
        for l in 0..k {
            c[k][l] = c[l][k];
        }
    }
    Ok(CMatrix(c))
}

pub fn c_matrix(rho: &DensityMatrix, mode: SummationMode, epsilon: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(rho.matrix())?;
    c_matrix_from_eigen(&eig, rho.n_qubits(), mode, epsilon)
}

/// Maximal mean QFI `c_max / N` together with the full C matrix.
pub fn max_mean_qfi(rho: &DensityMatrix, mode: SummationMode, epsilon: f64) -> Result<QfiResult> {
    let c = c_matrix(rho, mode, epsilon)?;
    Ok(result_from_c(c, rho.n_qubits(), mode, epsilon))
}

pub(crate) fn result_from_c(
    c: CMatrix,
    n_qubits: usize,
    mode: SummationMode,
    epsilon: f64,
) -> QfiResult {
    // values below the floor are eigensolver noise on an all-zero C
    let c_max = c.max_eigenvalue();
    let c_max = if c_max < QFI_FLOOR { 0.0 } else { c_max };
    let mean_f = c_max / n_qubits as f64;
    QfiResult {
        c_matrix: c,
        c_max,
        f_max: c_max,
        mean_f,
        n_qubits,
        mode,
        epsilon,
        classification: Classification::of(mean_f, n_qubits),
    }
}

/// QFI for rotations about `d`: `nᵀ C n`.
pub fn qfi_along(
    rho: &DensityMatrix,
    d: Direction,
    mode: SummationMode,
    epsilon: f64,
) -> Result<f64> {
    Ok(c_matrix(rho, mode, epsilon)?.quadratic_form(d))
}

/// `4 Var(J_n)` for a pure state.
pub fn pure_state_qfi(psi: &PureState, d: Direction) -> Result<f64> {
    let j = collective_operator(psi.n_qubits(), d)?;
    let amps = psi.amplitudes();
    let j_psi = j.mul_vec(amps)?;
    let mean: Complex64 = amps.iter().zip(&j_psi).map(|(a, b)| a.conj() * b).sum();
    let second: f64 = j_psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(4.0 * (second - mean.re * mean.re))
}

/// Cramér–Rao phase bound `1/√(n_m F)`.
pub fn qcrb(f: f64, n_m: u64) -> Result<f64> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(QfiError::UndefinedBound(f));
    }
    if n_m == 0 {
        return Err(QfiError::InvalidArgument(
            "number of repetitions must be at least 1".into(),
        ));
    }
    Ok(1.0 / (n_m as f64 * f).sqrt())
}

/// Uhlmann root fidelity `tr √(√ρ σ √ρ)`, evaluated as the trace norm
/// `‖√ρ √σ‖₁` from singular values.
pub fn root_fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let sqrt_psd = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
        let eig = hermitian_eig(m)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -1e-12 {
            return Err(QfiError::OracleFailure(format!(
                "square root of a matrix with eigenvalue {min:e}"
            )));
        }
        Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
    };
    let product = sqrt_psd(rho)?.matmul(&sqrt_psd(sigma)?)?;
    Ok(singular_values(&product)?.iter().sum())
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn uhlmann_fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    root_fidelity(rho, sigma).map(|f| f * f)
}

/// Regularization weight towards the maximally mixed state.
pub const ORACLE_ETA: f64 = 1e-6;
pub const ORACLE_DPHI: f64 = 1e-4;

/// Finite-difference QFI from the Bures fidelity of rotated copies.
///
/// ρ is first mixed with `η I/d` so it is full rank, then rotated by
/// `±dphi` about `d`; `F ≈ 8 (1 − √F_U) / (2 dphi)²`. Independent of the
/// spectral pair sum, so it checks the `FullSpectrum` mode.
pub fn fidelity_qfi_oracle(rho: &DensityMatrix, d: Direction, dphi: f64) -> Result<f64> {
    fidelity_qfi_oracle_with(rho, d, dphi, ORACLE_ETA)
}

pub fn fidelity_qfi_oracle_with(
    rho: &DensityMatrix,
    d: Direction,
    dphi: f64,
    eta: f64,
) -> Result<f64> {
    if !(dphi > 0.0) {
        return Err(QfiError::InvalidArgument(format!(
            "finite-difference step must be positive, got {dphi}"
        )));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(QfiError::InvalidArgument(format!(
            "regularization weight must lie in [0, 1), got {eta}"
        )));
    }
    let dim = rho.dim();
    let reg = rho
        .matrix()
        .scale_real(1.0 - eta)
        .add(&ComplexMatrix::identity(dim).scale_real(eta / dim as f64))?;
    let j = collective_operator(rho.n_qubits(), d)?;
    let forward = reg.conjugate_by(&unitary_evolution(&j, dphi)?)?;
    let backward = reg.conjugate_by(&unitary_evolution(&j, -dphi)?)?;
    let root = root_fidelity(&backward, &forward)?;
    let sep = 2.0 * dphi;
    Ok(8.0 * (1.0 - root) / (sep * sep))
}
