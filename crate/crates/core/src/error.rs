use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
