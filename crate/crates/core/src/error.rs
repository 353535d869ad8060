use thiserror::Error;

/// Errors raised by the signlab algorithms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank}: {reason}")]
    InvalidRank { rank: usize, reason: &'static str },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid simple-root subset: {0}")]
    InvalidSubset(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("group of order {order} exceeds the element cap {cap}")]
    GroupTooLarge { order: u128, cap: u64 },

    #[error("image of {label} leaves the element set")]
    Closure { label: String },

    #[error("element is not a member of {0}")]
    NotAMember(String),

    #[error("{0} is not an involution")]
    NotAnInvolution(String),

    #[error("{0} is not central")]
    NotCentral(String),

    #[error("class functions belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("character table computation failed: {0}")]
    TableFailure(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
