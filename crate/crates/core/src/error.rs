use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A level or node index is out of range or out of order.
    #[error("index error: {0}")]
    Index(String),

    /// A function returned a non-finite value, e.g. at a pole.
    #[error("evaluation failed at {at}: {reason}")]
    Evaluation { at: String, reason: String },

    /// A hypothesis of the bound does not hold for the requested experiment.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    /// An internal consistency audit failed.
    #[error("audit failure: {0}")]
    Audit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn index(msg: impl Into<String>) -> Self {
        Error::Index(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}
