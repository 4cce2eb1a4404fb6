use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QfiError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("channel violates completeness: max |sum E^dag E - I| = {deviation:e}")]
    ChannelViolation { deviation: f64 },

    #[error("Cramer-Rao bound undefined for Fisher information {0}")]
    UndefinedBound(f64),

    #[error("fidelity oracle failed: {0}")]
    OracleFailure(String),

    #[error("failed to parse {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("nothing to emit: result set is empty")]
    EmptyResult,
}

impl QfiError {
    /// Process exit code used by the `qfi` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            QfiError::Io { .. } => 2,
            QfiError::EmptyResult => 3,
            QfiError::ChannelViolation { .. } => 4,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QfiError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, QfiError>;
