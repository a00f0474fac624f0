use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which validity check a density matrix failed.
#[derive(Debug, Clone, PartialEq)]
pub enum StateViolation {
    Dimensions { dims: (usize, usize), rows: usize, cols: usize },
    NotHermitian { deviation: f64 },
    Trace { trace: f64 },
    NegativeEigenvalue { eigenvalue: f64 },
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::Dimensions { dims, rows, cols } => write!(
                f,
                "dims {}x{} require a {}x{} matrix, got {rows}x{cols}",
                dims.0,
                dims.1,
                dims.0 * dims.1,
                dims.0 * dims.1
            ),
            StateViolation::NotHermitian { deviation } => {
                write!(f, "not Hermitian (max |rho - rho^dagger| = {deviation:.3e})")
            }
            StateViolation::Trace { trace } => write!(f, "trace is {trace} instead of 1"),
            StateViolation::NegativeEigenvalue { eigenvalue } => {
                write!(f, "negative eigenvalue {eigenvalue:.3e}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid qubit permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("vectors are linearly dependent at index {index}")]
    RankDeficient { index: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: String, reason: &'static str },

    #[error("invalid state: {0}")]
    InvalidState(StateViolation),

    #[error("operation requires a two-qubit state, got dims {0:?}")]
    WrongDimensions((usize, usize)),

    #[error("invalid filter rows: {0}")]
    InvalidFilter(String),

    #[error("postselection success probability {probability:.3e} is below threshold")]
    ZeroProbability { probability: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Failures caused by floating-point behaviour rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::ZeroProbability { .. } | Error::RankDeficient { .. })
    }

    pub(crate) fn param(name: &'static str, value: impl fmt::Display, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value: value.to_string(), reason }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
