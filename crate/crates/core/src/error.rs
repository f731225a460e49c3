use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("form belongs to complex `{found}`, expected `{expected}`")]
    ComplexMismatch { expected: String, found: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree {degree} exceeds the top degree {max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("form has {found} values but degree {degree} has {expected} cells")]
    LengthMismatch { degree: usize, expected: usize, found: usize },

    #[error("the codifferential of a 0-form vanishes identically")]
    BottomDegree,

    #[error("cell ({degree}, {index}) does not exist")]
    NoSuchCell { degree: usize, index: usize },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("insufficient depth: need level {needed}, have {available}")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
