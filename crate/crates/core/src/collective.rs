//! Pauli matrices and collective spin operators `J_n = Σ_q (n·σ^(q))/2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{QfiError, Result};
use crate::matcore::{ComplexMatrix, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Pauli matrix; `σ_z = diag(1, -1)` so `|0⟩` is the +1 eigenstate.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    match axis {
        Axis::X => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        Axis::Y => ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
        Axis::Z => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// Unit rotation axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub const UNIT_TOL: f64 = 1e-12;

    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm2 = nx * nx + ny * ny + nz * nz;
        if !norm2.is_finite() || (norm2 - 1.0).abs() > Self::UNIT_TOL {
            return Err(QfiError::InvalidArgument(format!(
                "direction ({nx}, {ny}, {nz}) is not a unit vector"
            )));
        }
        Ok(Self([nx, ny, nz]))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(QfiError::InvalidArgument(
                "cannot normalize a zero direction".into(),
            ));
        }
        Ok(Self([nx / norm, ny / norm, nz / norm]))
    }

    pub fn along(axis: Axis) -> Self {
        let mut v = [0.0; 3];
        v[axis.index()] = 1.0;
        Self(v)
    }

    pub fn x() -> Self {
        Self::along(Axis::X)
    }

    pub fn y() -> Self {
        Self::along(Axis::Y)
    }

    pub fn z() -> Self {
        Self::along(Axis::Z)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

impl FromStr for Direction {
    type Err = QfiError;

    /// Accepts `x`, `y`, `z` or a comma-separated vector (normalized).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" => Ok(Self::x()),
            "y" => Ok(Self::y()),
            "z" => Ok(Self::z()),
            other => {
                let parts: Vec<f64> = other
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| QfiError::InvalidArgument(format!("direction {s:?}: {e}")))?;
                match parts.as_slice() {
                    [x, y, z] => Self::normalized(*x, *y, *z),
                    _ => Err(QfiError::InvalidArgument(format!(
                        "direction {s:?} needs three components"
                    ))),
                }
            }
        }
    }
}

/// Embeds a single-qubit operator on `qubit` of an `n_qubits` register
/// (qubit 0 is the most significant bit).
pub fn lift(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    assert!(
        qubit < n_qubits,
        "qubit {qubit} out of range for {n_qubits}"
    );
    let left = ComplexMatrix::identity(1 << qubit);
    let right = ComplexMatrix::identity(1 << (n_qubits - qubit - 1));
    left.kron(op).kron(&right)
}

/// `J_n = Σ_q ½ (n_x σ_x + n_y σ_y + n_z σ_z)^(q)`.
pub fn collective_operator(n_qubits: usize, d: Direction) -> Result<ComplexMatrix> {
    if n_qubits == 0 {
        return Err(QfiError::InvalidArgument(
            "collective operator needs at least one qubit".into(),
        ));
    }
    let [nx, ny, nz] = d.components();
    let local = pauli(Axis::X)
        .scale_real(0.5 * nx)
        .add(&pauli(Axis::Y).scale_real(0.5 * ny))?
        .add(&pauli(Axis::Z).scale_real(0.5 * nz))?;
    let dim = 1usize << n_qubits;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for q in 0..n_qubits {
        out.add_scaled_assign(&lift(&local, q, n_qubits), Complex64::new(1.0, 0.0))?;
    }
    Ok(out)
}

/// `[J_x, J_y, J_z]` for a register.
pub fn collective_axes(n_qubits: usize) -> Result<[ComplexMatrix; 3]> {
    Ok([
        collective_operator(n_qubits, Direction::x())?,
        collective_operator(n_qubits, Direction::y())?,
        collective_operator(n_qubits, Direction::z())?,
    ])
}
