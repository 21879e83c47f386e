use thiserror::Error;

/// Errors raised by model construction, sampling and the checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown point handle {0}")]
    UnknownPoint(usize),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("operation not supported by this model: {0}")]
    Unsupported(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("unresolved at truncation depth {depth}: radius {r} exceeds it")]
    Unresolved { r: f64, depth: f64 },
    #[error("not a covering: cell {0} is not covered")]
    NotCovering(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
