use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("reduction incomplete: {0}")]
    ReductionIncomplete(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("Maass relation violated: {0}")]
    MaassViolation(String),
    #[error("index outside table bound: {0}")]
    OutOfBound(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
