use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the Kronecker symbol (0/0) is undefined")]
    KroneckerUndefined,

    #[error("a character discriminant must be nonzero")]
    ZeroDiscriminant,

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("an eta quotient needs at least one factor")]
    EmptyQuotient,

    #[error("eta scales must be positive")]
    ZeroScale,

    #[error("exponent of eta({scale}z) must be positive, got {exponent}")]
    NonPositiveExponent { scale: u64, exponent: i64 },

    #[error("∑ m·r_m = {weighted_sum} ≢ 0 (mod 24); the quotient is not a modular form")]
    NotModular { weighted_sum: u64 },

    #[error("precision {prec} must exceed the valuation {valuation}")]
    PrecisionTooSmall { prec: usize, valuation: u64 },

    #[error("weight {weight_num}/2 is integral; only half-integral weights are supported here")]
    IntegralWeight { weight_num: u32 },

    #[error("the Purkait bound needs odd k >= 3 and 4 | N (got k = {weight_num}, N = {level})")]
    PurkaitDomain { weight_num: u32, level: u64 },

    #[error("level {level} is not divisible by 4")]
    LevelNotDivisibleByFour { level: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("T_{{{prime}^2}} needs at least {prime}^2 coefficients, got {prec}")]
    InsufficientPrecision { prime: u64, prec: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
