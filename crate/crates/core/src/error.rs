use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quantity that must be an integer came out with a nontrivial
    /// denominator. Signals an implementation bug, never bad input.
    #[error("consistency fault: {0}")]
    Consistency(String),
    /// An iteration failed to converge within its cap.
    #[error("numeric fault: {0}")]
    Numeric(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
