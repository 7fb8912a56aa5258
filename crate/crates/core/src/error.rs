use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} has degree 0")]
    IsolatedVertex(usize),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph has {n} vertices, limit for this operation is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best lambda1 {lambda1:.6e}, residual {residual:.3e})")]
    NotConverged {
        lambda1: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("graph is bipartite")]
    Bipartite,

    #[error("invalid data in {path}: {msg}")]
    Data { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. } => 2,
            Error::Io(_) | Error::Csv(_) | Error::Data { .. } => 3,
            _ => 1,
        }
    }
}
