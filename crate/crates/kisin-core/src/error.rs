use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KisinError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("outside validity domain: {0}")]
    OutsideValidityDomain(String),
    #[error("point is not in the cone Q: {0}")]
    NotInCone(String),
    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, KisinError>;
