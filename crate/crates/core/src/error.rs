use thiserror::Error;

use crate::decompose::Stats;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("column {0} is the zero vector")]
    ZeroColumn(usize),

    #[error("column {0} is not primitive")]
    NotPrimitive(usize),

    #[error("decomposition direction is the zero vector")]
    ZeroDirection,

    #[error("A*beta is not an integral vector")]
    NonIntegralDirection,

    #[error("coefficient k_{0} is zero; the modified matrix would be singular")]
    ZeroCoefficient(usize),

    #[error("direction has no positive coefficient")]
    NoPositiveCoefficient,

    #[error("coefficient {0} is not strictly positive")]
    NonPositiveCoefficient(usize),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("cone is already unimodular")]
    AlreadyUnimodular,

    #[error("LLL parameter must lie strictly between 1/4 and 1")]
    InvalidDelta,

    #[error("|det| = {det} exceeds the enumeration budget {budget}")]
    EnumerationBudget { det: String, budget: u64 },

    #[error("decomposition budget exceeded: {reason}")]
    BudgetExceeded { reason: String, stats: Box<Stats> },

    #[error("decomposition aborted by sink")]
    Aborted,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed cone list: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
