use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),

    #[error("zero vector")]
    ZeroVector,

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("search volume {estimate:.3e} for d={dim}, D={norm} exceeds the budget {limit:.3e}")]
    BudgetExceeded {
        dim: usize,
        norm: u64,
        estimate: f64,
        limit: f64,
    },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("the sphere of dimension {dim} and squared radius {norm} has no primitive points")]
    EmptySphere { dim: usize, norm: u64 },

    #[error("need at least {need} points, got {have}")]
    TooFewPoints { have: u64, need: u64 },

    #[error("matrix is not in the special orthogonal group of the form")]
    NotSpecialOrthogonal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
