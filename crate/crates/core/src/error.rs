use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("value {0} lies outside the domain of the map")]
    Domain(String),

    #[error("invalid map data: {0}")]
    InvalidMap(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("malformed encoding: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// An internal invariant failed. Seeing this means a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
