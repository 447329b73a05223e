use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} is out of the supported range")]
    FieldTooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {element} is not in a field of order {order}")]
    InvalidElement { element: u32, order: u32 },
    #[error("abscissa {0} appears more than once")]
    DuplicateAbscissa(u32),
    #[error("expected {expected} interpolation points, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("malformed clique #{index}: {reason}")]
    MalformedClique { index: usize, reason: String },
    #[error("malformed edge #{index}: {reason}")]
    MalformedEdge { index: usize, reason: String },
    #[error("bad uniformity: {0}")]
    BadUniformity(String),
    #[error("degree bound k={k} must satisfy 2 <= k < Q={field_order}")]
    BadDegreeBound { k: usize, field_order: u64 },
    #[error("trace of clique #{index} has {size} vertices, more than the target {target}")]
    TraceTooLarge { index: usize, size: usize, target: usize },
    #[error("no prime p with p^2 + p <= {e} and p <= {q}")]
    NoValidPrime { e: u64, q: u64 },
    #[error("out of range: {0}")]
    RangeError(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("vertex {0} has no color")]
    UncoloredVertex(usize),
    #[error("system has ell = {0}, expected a 1-system")]
    NotOneSystem(usize),
    #[error("restriction failed after {0} attempts")]
    RestrictionFailed(u32),
}
