use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GkfError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported set: {0}")]
    UnsupportedSet(String),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("basis {0} is not allowed here (expected one of {1})")]
    BasisNotAllowed(String, &'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("exact path limited to N <= {limit}, got N = {n}")]
    ExactLimit { n: usize, limit: usize },
}

pub type Result<T, E = GkfError> = std::result::Result<T, E>;
