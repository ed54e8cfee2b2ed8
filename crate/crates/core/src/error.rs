use thiserror::Error;

use crate::transgroup::GroupRejection;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),

    #[error("power exponent must be at least 1")]
    ZeroPower,

    /// Two points of one block land in different blocks.
    #[error("induced map ill-defined on block {block}: {first} and {second} map to different blocks")]
    IllDefined { block: usize, first: usize, second: usize },

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("invalid semidirect spec: {0}")]
    InvalidSpec(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A computed object contradicts a proven structural fact. Always a bug.
    #[error("internal consistency alarm: {0}")]
    Alarm(String),

    #[error("not a group: {0}")]
    Rejected(#[from] GroupRejection),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, cap: usize) -> Self {
        Error::CapExceeded { what: what.into(), cap }
    }
}
