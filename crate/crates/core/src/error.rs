use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group mismatch: expected ({expected}), found ({found})")]
    SpecMismatch { expected: String, found: String },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("coefficients do not commute")]
    NonCommuting,

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
