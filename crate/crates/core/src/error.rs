use thiserror::Error;

use crate::search::Checkpoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("mask {bits:#x} is out of range for a set of {n} elements")]
    InvalidMask { bits: u64, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("set of {n} elements exceeds the limit of {limit} for this operation; {hint}")]
    Capacity {
        n: usize,
        limit: usize,
        hint: &'static str,
    },

    /// The search ran out of its time budget. The checkpoint holds every
    /// completed shard and can be resumed.
    #[error("budget exceeded after {} of {} shards", .0.shards_done.len(), .0.shard_count)]
    BudgetExceeded(Box<Checkpoint>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
