//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },

    #[error("element is not in a+n: {0}")]
    NotTriangular(String),

    #[error("matrix is not in the ambient algebra: {0}")]
    NotInAlgebra(String),

    #[error("matrix has a real eigenvalue")]
    RealEigenvalue,

    #[error("basis is not closed under bracket")]
    NotClosed,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("item is not realizable as a closed subalgebra: {0}")]
    Unrealizable(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("group invariant violated: {0}")]
    NotInGroup(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("no prediction available: {0}")]
    NoPrediction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
