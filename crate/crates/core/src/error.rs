use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistillError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural precondition was violated (length mismatch, negative mass, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The request exceeds what the exhaustive routines are sized for.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, DistillError>;

pub(crate) fn domain(msg: impl Into<String>) -> DistillError {
    DistillError::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> DistillError {
    DistillError::Contract(msg.into())
}
