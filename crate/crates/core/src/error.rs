use thiserror::Error;

/// Errors raised by the exact arithmetic and annihilator routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("element {value} does not belong to {field}")]
    ContextMismatch { value: String, field: String },

    #[error("modulus {0} is not a prime in (2, 2^62)")]
    InvalidModulus(u64),

    #[error("characteristic {p} is not larger than degree {degree}")]
    SmallCharacteristic { p: u64, degree: usize },

    #[error("degree {degree} exceeds the rational factorization cap {cap}; supply a factorization in the input file")]
    FactorizationTooLarge { degree: usize, cap: usize },

    #[error("supplied factorization does not expand to the characteristic polynomial")]
    FactorizationMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("random projection vector is zero")]
    ZeroRandomVector,

    #[error("repair of column {column} did not terminate within the multiplicity bounds")]
    RepairNonTermination { column: usize },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("could not draw a nonsingular similarity transform")]
    SingularSimilarity,

    #[error("invalid exponent bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
