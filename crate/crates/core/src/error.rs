use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or iteration did not reach the requested accuracy.
    /// `estimate` is the best value obtained and `error` its estimated error.
    #[error("accuracy error in {context}: estimate {estimate:e} with error {error:e}")]
    Accuracy { context: String, estimate: f64, error: f64 },

    /// A parameter is valid in principle but outside the supported range.
    #[error("range error: {0}")]
    Range(String),

    /// A constructive step (bracketing, bisection) failed.
    #[error("construction error: {0}")]
    Construction(String),

    /// Input data violates a structural invariant.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
