use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),

    #[error("field order {p}^{e} exceeds the supported limit of {limit}")]
    FieldTooLarge { p: u64, e: u32, limit: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroNotInvertible,

    #[error("zero has no discrete logarithm")]
    LogOfZero,

    #[error("invalid field element: {0}")]
    InvalidElement(String),

    #[error("additive character parameter must be nonzero")]
    ZeroAdditiveParameter,

    #[error("invalid exponent matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid monomial form: {0}")]
    InvalidForm(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("{what}: size {size} exceeds limit {limit}")]
    LimitExceeded { what: String, size: u128, limit: u64 },

    #[error("{0} exceeds 2^53; floating-point evaluation cannot round exactly")]
    PrecisionExhausted(String),

    #[error("{what}: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("consistency check failed: {0}")]
    Mismatch(String),
}
