use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    /// A certificate (tour, permutation) whose size does not fit the instance.
    #[error("invalid certificate: expected {expected} vertices, got {got}")]
    InvalidCertificate { expected: usize, got: usize },

    #[error("edge ({0}, {1}) is already present")]
    EdgePresent(Vertex, Vertex),

    #[error("edge ({0}, {1}) is not present")]
    EdgeAbsent(Vertex, Vertex),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("planted cycle lost: {0}")]
    InvariantBreach(String),

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("decode failed: {0}")]
    Decode(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("solver error: {0}")]
    Solver(String),

    #[error("benchmark plan: {0}")]
    Plan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, msg: msg.into() }
    }
}
