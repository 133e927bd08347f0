use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A documented precondition on the inputs does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The request exceeds a configured memory or work budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A numerical procedure failed to converge or bracket a root.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Integer overflow in exact arithmetic.
    #[error("arithmetic overflow: {0}")]
    Arithmetic(String),
    /// Evaluation at a pole of a formula.
    #[error("singularity: {0}")]
    Singularity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
