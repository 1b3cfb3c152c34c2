use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function is constant (lower and upper limits coincide at {0})")]
    DegenerateRange(f64),

    #[error("total mass {total} differs from 1 by more than {tolerance:e}")]
    MassMismatch { total: f64, tolerance: f64 },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("alpha {0} is outside (0, 1)")]
    AlphaOutOfRange(f64),

    #[error("lambda {0} is outside the admissible range")]
    LambdaOutOfRange(f64),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "alpha at index {0} does not lie in the open jump interval of the matching jump point"
    )]
    AlphaNotInJumpInterval(usize),

    #[error("transform value {0} is not in (0, 1); the left quantile is undefined there")]
    TransformOutOfRange(f64),

    #[error("malformed interval: {0}")]
    MalformedInterval(String),

    #[error("malformed set: {0}")]
    MalformedSet(String),

    #[error("sample is empty")]
    EmptySample,

    #[error("stream id {0} is shared with the sample it should be independent of")]
    StreamCollision(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the countermonotone copula only exists in dimension 2, not {0}")]
    CountermonotoneDimension(usize),

    #[error("coordinate {0} is not at a flat level (left and right quantiles coincide)")]
    NotAFlatLevel(usize),
}
