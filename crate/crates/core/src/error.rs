use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message} (near `{token}`)")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },

    #[error("gaps must be positive (gap `{token}` at position {position})")]
    NonPositiveGap { position: usize, token: String },

    #[error("a set must have at least one element")]
    EmptySet,

    #[error("element {0} exceeds the largest supported value 2^62-1")]
    ElementTooLarge(u128),

    #[error("operation needs at least 2 elements, got a singleton")]
    Singleton,

    #[error("unknown family S{0}; ids run from 1 to 15")]
    UnknownFamily(u8),

    #[error("family S{id} requires {constraint}")]
    FamilyConstraint { id: u8, constraint: &'static str },

    #[error("family S{id}: parameter {param} must be positive")]
    ZeroParameter { id: u8, param: char },

    #[error("elements {0:?} appear both in the progression and in the extras")]
    Overlap(Vec<u64>),

    #[error("invalid search parameters: {0}")]
    InvalidParams(String),

    #[error(
        "prime pool of {size} elements would visit about {nodes:.3e} subsets; \
         refusing without an explicit override"
    )]
    PoolTooLarge { size: usize, nodes: f64 },

    #[error("checkpoint {path} does not match this run: {reason}")]
    CheckpointMismatch { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
