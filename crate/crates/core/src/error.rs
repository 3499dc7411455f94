use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HdxError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("no cone: {0}")]
    NoCone(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("io: {0}")]
    Io(String),
}

impl HdxError {
    /// Process exit code used by the `hdx` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            HdxError::Malformed(_) | HdxError::Domain(_) | HdxError::Unsupported(_) => 2,
            HdxError::Resource(_) | HdxError::Overflow(_) => 3,
            HdxError::NoCone(_) => 4,
            HdxError::Io(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, HdxError>;

impl From<std::io::Error> for HdxError {
    fn from(e: std::io::Error) -> Self {
        HdxError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for HdxError {
    fn from(e: serde_json::Error) -> Self {
        HdxError::Malformed(e.to_string())
    }
}
