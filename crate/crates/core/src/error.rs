use thiserror::Error;

/// Errors produced by the bound evaluators, the simulator and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    /// A computed result broke a property it must satisfy.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
