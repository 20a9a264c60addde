use ivsk_core::{Format, ValueKind};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("not an ivsk container (bad magic)")]
    BadMagic,

    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),

    #[error("unknown format code {0}")]
    UnknownFormat(u8),

    #[error("unknown value kind code {0}")]
    UnknownValueKind(u8),

    #[error("invalid index size {idx_size} for {format}")]
    BadIndexSize { format: Format, idx_size: u8 },

    #[error("truncated data: needed {needed} bytes, {available} available")]
    Truncated { needed: u64, available: u64 },

    #[error("payload length mismatch: header implies {expected} bytes, found {found}")]
    LengthMismatch { expected: u64, found: u64 },

    #[error("expected a {expected} container, found {found}")]
    UnexpectedFormat { expected: Format, found: Format },

    #[error("expected {expected} values, found {found}")]
    UnexpectedValueKind { expected: ValueKind, found: ValueKind },

    #[error("matrix market line {line}: {msg}")]
    MatrixMarket { line: usize, msg: String },

    #[error("unsupported file extension: {0}")]
    UnsupportedExtension(String),

    #[error(transparent)]
    Matrix(#[from] ivsk_core::Error),
}

pub type Result<T> = std::result::Result<T, IoError>;
