use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ill-formed ring: {0}")]
    IllFormed(String),
    #[error("multiplication is not associative on basis triple (e{0}, e{1}, e{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element set is not closed under the ring operations: {0}")]
    NotClosed(String),
    #[error("ring order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("subset is not a two-sided ideal")]
    NotAnIdeal,
    #[error("ring is not coverable by proper subrings (element {0} lies in none)")]
    NotCoverable(usize),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{a} does not divide {n}")]
    NotADivisor { a: usize, n: usize },
    #[error("tuple analysis contradiction: {0}")]
    AnalysisContradiction(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
