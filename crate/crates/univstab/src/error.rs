use thiserror::Error;

/// Every failure the library reports. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not stable: {0}")]
    Unstable(String),
    #[error("bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("degree must be an integer, got {0}")]
    NonIntegerDegree(String),
    #[error("parameter is degenerate: {0}")]
    Degenerate(String),
    #[error("subgraph is not elementary")]
    NonElementary,
    #[error("box is unbounded or empty")]
    UnboundedBox,
    #[error("dimension {0} is too large for this operation")]
    DimensionTooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no fixed-degree involution exists in degree {0}")]
    NoInvolution(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
