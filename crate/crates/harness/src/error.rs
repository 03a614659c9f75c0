use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("frame of {0} bytes exceeds the 16 MiB limit")]
    FrameTooLarge(u64),

    #[error("unknown frame type 0x{0:02x}")]
    UnknownFrameType(u8),

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("peer speaks protocol version {0}, expected 1")]
    VersionMismatch(u8),

    #[error("peer uses a different group")]
    GroupMismatch,

    #[error("key confirmation digest mismatch")]
    DigestMismatch,

    #[error("peer aborted: {0}")]
    PeerAbort(String),

    #[error("transport closed")]
    Closed,

    #[error(transparent)]
    Core(#[from] plgroup::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
