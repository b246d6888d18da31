use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Numeric(#[from] tucker_sketch::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        BenchError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status: 1 usage, 2 I/O or file format, 3 numerical parameters.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 1,
            BenchError::Io { .. } | BenchError::Format { .. } => 2,
            BenchError::Numeric(tucker_sketch::Error::Format(_)) => 2,
            BenchError::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
