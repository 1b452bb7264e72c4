use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown point {0:?}")]
    UnknownPoint(String),

    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),

    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: Vec<String>, found: Vec<String> },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid point map: {0}")]
    InvalidMap(String),

    #[error("invalid test function: {0}")]
    InvalidFunction(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("empty subset")]
    EmptySubset,

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: String, range: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was called outside its domain of definition (e.g. the
    /// retraction on a functional that is not in `OS_f`).
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}
