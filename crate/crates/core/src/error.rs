use serde::Serialize;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failing axiom instance, flattened to text so that errors stay
/// independent of the coefficient type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailedInstance {
    pub axiom: String,
    pub tuple: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("values belong to different signatures")]
    SignatureMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("undeclared parameter `{0}`")]
    UndeclaredParameter(String),
    #[error("variable class violation: {0}")]
    VariableClass(String),
    #[error("entry ({left}, {right}) is not homogeneous of parity {expected}: {value}")]
    Parity {
        left: String,
        right: String,
        expected: String,
        value: String,
    },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition suite `{suite}` failed with {} finding(s)", failures.len())]
    Precondition {
        suite: String,
        failures: Vec<FailedInstance>,
    },
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error("structure file: {0}")]
    File(String),
}
