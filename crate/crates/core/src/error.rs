use num_rational::BigRational;
use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for an instance with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("weight of vertex {vertex} must be positive, got {weight}")]
    NonPositiveWeight { vertex: usize, weight: BigRational },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("claw parameter must be at least {min}, got {d}")]
    InvalidClawParameter { d: usize, min: usize },

    #[error("vertex set is not independent: {0} and {1} are adjacent")]
    NotIndependent(usize, usize),

    #[error("invalid claw: {0}")]
    InvalidClaw(String),

    #[error("set {index} is invalid: {reason}")]
    InvalidSet { index: usize, reason: String },

    #[error(
        "improvement is stale: its displaced set does not match N(X, A) for the current solution"
    )]
    StaleImprovement,

    #[error("solution is not maximal: vertex {vertex} has no neighbor in it")]
    NotMaximal { vertex: usize },

    #[error("{what} is {value}, which exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ratio is undefined for a solution of weight zero")]
    ZeroWeightSolution,

    #[error("square root of {0} is not rational")]
    IrrationalSqrt(BigRational),
}

pub type Result<T> = std::result::Result<T, Error>;
