//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by constructions and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data is malformed (dimension mismatch, bad index, ...).
    #[error("structural error: {0}")]
    Structure(String),

    /// Input violates a documented domain restriction.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction that should succeed by theory failed numerically.
    #[error("construction failed: {0}")]
    Construction(String),

    /// Sampling is too coarse for the answer to be well defined.
    #[error("ambiguous sampling: {0}")]
    Ambiguity(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
