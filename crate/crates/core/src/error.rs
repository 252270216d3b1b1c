use thiserror::Error;

use crate::classify::ClassificationVerdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("{a} is not a unit mod {n}")]
    NotAUnit { a: u64, n: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{q} is not a coprime divisor of {n}")]
    NotCoprimeDivisor { q: u64, n: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("prime {0} appears in more than one factor")]
    RepeatedPrime(u64),
    #[error("AGL_1(Z/{0}Z) has no noncommuting pair")]
    NoPair(u64),
    #[error("AGL_1(Z/{}Z) contains no cross-commuting nonabelian square ({:?})", .0.n, .0.reason)]
    NoSquare(Box<ClassificationVerdict>),
    #[error("factor index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("both families must live on distinct factors, got index {0} twice")]
    SameFactor(usize),
    #[error("block arrays need m >= 3 maps per family, got {0}")]
    FamilyTooSmall(usize),
    #[error("family length mismatch: {f} vs {g}")]
    FamilyLengthMismatch { f: usize, g: usize },
    #[error("permutation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("unsupported permutation degree {degree}: need at least {min}")]
    UnsupportedDegree { degree: usize, min: usize },
    #[error("exhaustive scan refused for n = {n} (limit {limit})")]
    BudgetExceeded { n: u64, limit: u64 },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("product of factors overflows 64 bits")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that describe a mathematical outcome rather than bad input.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::NoSquare(_) | Error::NoPair(_))
    }
}
