use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("boundary mismatch: expected {expected}, got {got}")]
    BoundaryMismatch { expected: usize, got: usize },
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at t = {0}")]
    Pole(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("inconsistent interpolation points")]
    InconsistentPoints,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplicity deciders disagree: {0}")]
    DeciderDisagreement(String),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("zero carrier at fiber n = {0}")]
    ZeroCarrier(usize),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
