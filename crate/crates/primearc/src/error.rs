//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A computation would exceed a configured resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Inputs outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hard precondition of an operation is violated.
    #[error("precondition `{name}` violated: {detail}")]
    Precondition { name: String, detail: String },

    /// Malformed input data (zero tables, checkpoints, configs).
    #[error("ingestion error at line {line}: {msg}")]
    Ingest { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn precondition(name: &str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            name: name.to_string(),
            detail: detail.into(),
        }
    }

    /// CLI process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
