use thiserror::Error;

/// Errors raised by the simulator and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or input violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two states or operators do not share the same layout or dimension.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The requested size exceeds a configured memory/time guard.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    /// A numerical routine failed (non-convergence, singular integrand, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
