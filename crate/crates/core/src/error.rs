use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible (valuation {ord})")]
    NotInvertible { ord: usize },
    #[error("precision error: {0}")]
    Precision(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("classification error: {0}")]
    Classification(String),
    /// An invariant that the mathematics guarantees was observed to fail.
    #[error("internal error (bug): {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
