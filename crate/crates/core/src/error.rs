use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word {index} is empty")]
    EmptyWord { index: usize },

    #[error("word {index} contains a zero byte")]
    ZeroByte { index: usize },

    #[error("pattern contains a zero byte")]
    InvalidPattern,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("table full: {0}")]
    TableFull(String),

    #[error("not an index file (bad magic)")]
    BadMagic,

    #[error("unsupported index version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("index file truncated: needed {needed} more bytes")]
    Truncated { needed: usize },

    #[error("index checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("corrupt index: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
