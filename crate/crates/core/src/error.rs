use thiserror::Error;

/// Errors raised by the library. Each variant maps to one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent arguments (empty grids, bad windows, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An iterative or adaptive procedure stopped before meeting its tolerance.
    #[error("no convergence: {message} (best estimate {estimate:e}, error estimate {error:e})")]
    Convergence {
        message: String,
        estimate: f64,
        error: f64,
    },

    /// The request is outside the range where the underlying theory applies.
    #[error("out of scope: {0}")]
    Scope(String),

    /// A user-supplied series does not satisfy its declared growth envelope.
    #[error("specification violated: {0}")]
    Specification(String),

    /// Two routes to the same quantity disagree by more than their error budgets.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn scope(msg: impl Into<String>) -> Self {
        Error::Scope(msg.into())
    }
}
