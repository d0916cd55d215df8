use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCap { order: BigUint, cap: u64 },

    #[error("not transitive")]
    NotTransitive,

    #[error("degree {0} is below the minimum of 2")]
    DegreeTooSmall(usize),

    #[error("element is not in the group")]
    NotInGroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("partition is not invariant: generator {generator} splits block {block}")]
    NotInvariant { generator: usize, block: usize },

    #[error("interval domain error: {0}")]
    Domain(String),

    #[error("comparison of {what} is indeterminate at {bits} bits")]
    Indeterminate { what: String, bits: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
