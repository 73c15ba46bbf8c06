use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("precision must be at least 1, got {0}")]
    InvalidPrecision(usize),
    #[error("element is not a unit (divisible by p)")]
    NotAUnit,
    #[error("division by zero")]
    DivisionByZero,
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u32, right: u32 },
    #[error("insufficient precision: need {needed} digits, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },
    #[error("cannot lower a level-{from} function to level {to}")]
    CannotLower { from: u32, to: u32 },
    #[error("insufficient level: need at least {needed}, got {available}")]
    InsufficientLevel { needed: u32, available: u32 },
    #[error("expected {expected} values, got {actual}")]
    InvalidLength { expected: usize, actual: usize },
    #[error("{p}^{exponent} does not fit in a machine word")]
    Overflow { p: u32, exponent: u32 },
    #[error("exact mode limited to p^n <= {cap}, requested {requested}")]
    ExactnessCap { cap: u64, requested: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
