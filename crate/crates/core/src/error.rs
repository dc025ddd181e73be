use thiserror::Error;

/// Errors raised by the arithmetic and geometry layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("not birational: exponent lattice determinant is {det}")]
    NotBirational { det: String },

    #[error("point lies outside the torus (coordinate {0} is zero under a negative exponent)")]
    OutsideTorus(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
