use thiserror::Error;

use crate::families::FamilyId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("order {order} exceeds capacity {capacity}")]
    Capacity { order: usize, capacity: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("family {0} has no registry entry")]
    NotPinned(FamilyId),

    #[error("family {0} has no closed-form polynomial")]
    NoPolynomial(FamilyId),

    #[error("unknown lemma delta `{0}`")]
    UnknownLemma(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            offset: e.column(),
            message: e.to_string(),
        }
    }
}
