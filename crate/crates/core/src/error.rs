use thiserror::Error;

/// Errors raised by the primitive operations on spaces, functions and families.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("finite space must contain at least one point")]
    EmptySpace,
    #[error("duplicate point identifier `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("function has {got} values but the space has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at point `{point}`")]
    NonFinite { point: String },
    #[error("functions live on different spaces")]
    SpaceMismatch,
    #[error("tolerance {0} outside [0, 1e-3)")]
    BadTolerance(f64),
    #[error("phi evaluation failed at s = {s}, t = {t}: {reason}")]
    PhiEval { s: String, t: String, reason: String },
    #[error("invalid phi specification: {0}")]
    InvalidPhi(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid map table: {0}")]
    InvalidTable(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
