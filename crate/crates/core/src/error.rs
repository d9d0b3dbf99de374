use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size limit exceeded: {what} is {got}, maximum {max}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not square")]
    NotSquare,
    #[error("E({axis},0) is a kernel mode and has no Green pairing")]
    KernelMode { axis: usize },
    #[error("invalid covector E({axis},{freq}) for dimension {n}")]
    InvalidCovector { axis: usize, freq: i64, n: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("element has support outside the requested axes")]
    SupportViolation,
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
}

pub type Result<T> = std::result::Result<T, Error>;
