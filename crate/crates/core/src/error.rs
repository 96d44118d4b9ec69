use thiserror::Error;

/// Errors produced by the library. Parameter problems (bad primes, malformed
/// literals, domain mismatches) are distinguished from analysis outcomes:
/// a failed check is a report, never an `Error`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {1}")]
    PrimeTooLarge(u64, u64),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse rational literal `{0}`")]
    ParseRational(String),
    #[error("cannot parse norm value `{0}`")]
    ParseNorm(String),
    #[error("cannot parse space descriptor `{0}`: {1}")]
    ParseSpace(String, String),
    #[error("cannot parse map spec `{0}`: {1}")]
    ParseMap(String, String),
    #[error("norm values over different bases are not comparable ({left} vs {right})")]
    MixedBase { left: String, right: String },
    #[error("operands live over different primes ({left} vs {right})")]
    MismatchedPrime { left: u64, right: u64 },
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("point does not belong to the space: {0}")]
    IncompatibleSpace(String),
    #[error("map is not defined on this domain: {0}")]
    DomainMismatch(String),
    #[error("operation needs |2| = 1, but |2| = {p}^-1 over p = {p}")]
    TwoNotUnit { p: u64 },
    #[error("|a| = |b|: the sharp triangle equality is not guaranteed")]
    EqualNorms,
    #[error("exhaustive search over {size} elements exceeds the limit {limit}")]
    SizeGuard { size: u128, limit: u128 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not contractive at step {step}: {detail}")]
    NonContractive { step: usize, detail: String },
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("map has no computable inverse: {0}")]
    NotInvertible(String),
    #[error("|k| must be < 1 (k = {k} is a unit in this field)")]
    ScalarNotContractive { k: u64 },
    #[error("balls are not comparable by inclusion: {0}")]
    IncomparableBalls(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
