use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// One of the standing inequalities `l < n`, `r < N - n`, `1 <= k < r` fails.
    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::ParameterViolation(_) => 2,
            Error::InvariantViolation(_) => 3,
            Error::ResourceLimit(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
