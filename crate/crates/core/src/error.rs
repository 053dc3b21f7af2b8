use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps to a distinct CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("no codimension-one Abelian ideal: {0}")]
    NoIdeal(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("singular matrix")]
    Singular,
}

impl Error {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Dimension(_) | Error::Unsupported(_) | Error::Singular => 1,
            Error::InvalidAlgebra(_) => 2,
            Error::NoIdeal(_) => 3,
            Error::CrossCheck(_) => 4,
            Error::Verification(_) => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
