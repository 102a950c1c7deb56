use thiserror::Error;

/// Errors raised by space construction, estimators and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid space at `{path}`: {reason}")]
    InvalidSpace { path: String, reason: String },

    #[error("unsupported dimension {0}: only planar spaces are searched")]
    UnsupportedDimension(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("check `{check}` failed to evaluate: {source}")]
    Check {
        check: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_space(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidSpace {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
