//! Crate-wide error type.

/// Errors produced by the library and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix entry was NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// The eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge: off-diagonal residual {residual:.3e} after {sweeps} sweeps")]
    NoConvergence { residual: f64, sweeps: usize },

    /// Cholesky failed even after the full jitter ladder.
    #[error("matrix is not positive semidefinite: pivot {index} = {pivot:.6e}")]
    NotPositiveSemidefinite { index: usize, pivot: f64 },

    /// A dense computation was requested above the configured cap.
    #[error("dimension {requested} exceeds the dense {kind} cap of {cap}")]
    ResourceLimit {
        kind: &'static str,
        requested: usize,
        cap: usize,
    },

    /// A principal component with zero variance was requested.
    #[error("component {index} is undefined: {reason}")]
    UndefinedComponent { index: usize, reason: String },

    /// The operation is outside the supported parameter range.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A text input (CSV or config) failed to parse.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
