use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid qubit measurement parameters: {0}")]
    InvalidQubitParams(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("dimension {0} is not prime")]
    NotPrime(usize),

    #[error("index {index} out of range for {what} of size {size}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("operation requires {required} outcomes, ensemble has {found}")]
    OutcomeCount { required: usize, found: usize },

    #[error("ensemble is not orthogonal (max overlap {0:e})")]
    NotOrthogonal(f64),

    #[error("quadratic degenerates: leading coefficient {0:e} is numerically zero")]
    DegenerateQuadratic(f64),

    #[error("no perfect probe found (best residual {0:e})")]
    NoSolution(f64),

    #[error("partition is trivial: both parts must be nonempty")]
    TrivialPartition,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
