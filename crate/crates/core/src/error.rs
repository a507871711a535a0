use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("polynomial does not split over Q(i): {0}")]
    NotSplit(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator g{0} has no assigned matrix")]
    UnboundGenerator(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("not a ring subset: {0}")]
    NotRingSubset(String),
    #[error("eigenvalue {0} listed twice")]
    DuplicateEigenvalue(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("quotient ring is infinite-dimensional")]
    InfiniteQuotient,
    #[error("endomorphism is not semisimple")]
    NotSemisimple,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
