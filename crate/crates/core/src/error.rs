use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadoError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("64-bit overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("expected {expected} left-hand values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("malformed chain: {0}")]
    MalformedChain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, RadoError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(RadoError::Domain(msg.into()))
}
