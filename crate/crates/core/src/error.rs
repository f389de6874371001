use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("spectral operators need an odd sample count, got {0}")]
    EvenSampleCount(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("support radius must be positive, got {0}")]
    InvalidSupportRadius(f64),

    #[error("RBF system is singular: control points {first} and {second} coincide")]
    SingularRbfSystem { first: usize, second: usize },

    #[error("RBF system matrix is not positive definite")]
    RbfFactorization,

    #[error("degenerate cells at instant {instant}: {cells:?}")]
    Degenerate { instant: usize, cells: Vec<usize> },

    #[error("unknown motion case '{0}'")]
    UnknownCase(String),

    #[error("unknown IFMV method '{0}'")]
    UnknownMethod(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("order fit needs at least 3 points above the noise floor, got {0}")]
    InsufficientPoints(usize),

    #[error("non-physical state: {0}")]
    NonPhysicalState(String),

    #[error("pseudo-time iteration diverged after {iterations} iterations (RelErr {rel_err:e})")]
    Diverged { iterations: usize, rel_err: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
