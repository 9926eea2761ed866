use thiserror::Error;

/// Errors produced by the library.
///
/// Argument errors are violations of an operation's preconditions. Resource
/// errors are raised when an exact enumeration or a codebook would exceed the
/// configured [`Limits`](crate::Limits).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("resource guard exceeded: {quantity} = {requested} > limit {limit}")]
    ResourceLimit {
        quantity: &'static str,
        requested: u128,
        limit: u64,
    },

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
