use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is finite or defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A truncated series or product needed more terms than allowed.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// An iteration budget (steps, refinements) was exhausted.
    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
