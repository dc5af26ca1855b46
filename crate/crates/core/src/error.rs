use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("illegal specification: {0}")]
    IllegalSpec(String),
    #[error("not available: {0}")]
    NotAvailable(String),
    /// The deterministic oracle could not reach the requested tolerance.
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
