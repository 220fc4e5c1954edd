use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group has rank {rank}, not 3")]
    NotRank3 { rank: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("enumeration too large: {size} exceeds cap {cap}")]
    TooLarge { size: String, cap: u64 },
    #[error("degree {degree} exceeds the cap {cap} for {what}")]
    DegreeCap { what: &'static str, degree: usize, cap: usize },
    #[error("trivial block system")]
    TrivialBlocks,
    #[error("inconsistent affine frame: {0}")]
    InconsistentFrame(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
