use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible shapes: dimension or length mismatch between operands.
    #[error("shape error: {0}")]
    Shape(String),

    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed file contents; the message names the offending field.
    #[error("parse error: {0}")]
    Parse(String),

    /// Orbit expansion produced more distinct terms than the configured cap.
    #[error("orbit expansion exceeded cap of {cap} terms")]
    OrbitCapExceeded { cap: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
