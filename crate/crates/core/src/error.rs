use thiserror::Error;

pub type Result<T> = std::result::Result<T, BellError>;

#[derive(Debug, Error)]
pub enum BellError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// An enumeration or matrix size would exceed the configured limit.
    #[error("limit exceeded: {0}")]
    TooLarge(String),

    #[error("inequality `{0}` has no local bound attached")]
    MissingBound(String),

    #[error("unknown inequality `{0}`")]
    UnknownName(String),

    #[error("no violation reachable: {0}")]
    NoViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BellError {
    /// Computation-side failures (limits, missing violation) as opposed to bad input.
    pub fn is_computational(&self) -> bool {
        matches!(self, BellError::TooLarge(_) | BellError::NoViolation(_))
    }
}
