use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("hypothesis refused: {0}")]
    HypothesisRefused(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
