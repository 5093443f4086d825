use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("index of zero is +∞")]
    ZeroIndex,
    #[error("designated bidegree ({0},{1}) is below the actual bidegree ({2},{3})")]
    BidegreeTooSmall(u32, u32, u32, u32),
    #[error("hypothesis m1=m2=m violated (m={m}, m1={m1}, m2={m2})")]
    DistinctCoordinates { m: usize, m1: usize, m2: usize },
    #[error("weight ({0}) exceeds the designated bidegree")]
    WeightTooLarge(String),
    #[error("weight components must be positive")]
    NonPositiveWeight,
    #[error("fiber in D")]
    FiberInDivisor,
    #[error("points must be pairwise distinct")]
    DuplicatePoint,
    #[error("V is undefined for negative argument")]
    NegativeArgument,
    #[error("no nonzero solution guaranteed (rank {rank} >= unknowns {unknowns})")]
    NoSolutionGuaranteed { rank: usize, unknowns: usize },
    #[error("target index must lie in (0, 2], got {0}")]
    BadTargetIndex(String),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite (pivot {0} is {1})")]
    NotPositiveDefinite(usize, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
