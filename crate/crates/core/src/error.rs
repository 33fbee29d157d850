use std::io;

use thiserror::Error;

/// Errors produced by the wave atom / boundary integral pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result is too large to be represented as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("invalid atom index: {0}")]
    InvalidIndex(String),

    /// Malformed on-disk artifact (bad magic, version or truncated payload).
    #[error("format error: {0}")]
    Format(String),

    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
