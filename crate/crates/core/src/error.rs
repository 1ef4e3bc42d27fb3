use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FemError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand value {value} at t = {location}")]
    NonFinite { location: f64, value: f64 },

    #[error("t = {t} lies outside [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("non-positive pivot {pivot} at row {row}")]
    SingularMatrix { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("missing data: {0}")]
    MissingData(String),
}

pub type Result<T> = std::result::Result<T, FemError>;
