use thiserror::Error;

use crate::graph::NodeId;
use crate::mechanisms::Mechanism;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },

    #[error("unknown node label {0}")]
    UnknownLabel(u64),

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid candidate pool: {0}")]
    InvalidPool(String),

    #[error("candidate pool is empty")]
    EmptyPool,

    #[error("mechanism `{0}` is not supported here")]
    UnsupportedMechanism(Mechanism),

    #[error("refusing to enumerate {count} ordered output lists (limit {limit})")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("bound undefined: {0}")]
    UndefinedBound(String),

    #[error("no eligible query nodes")]
    NoEligibleQueries,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
