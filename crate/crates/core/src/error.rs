use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
///
/// The variants group into three classes that the command-line front end maps
/// onto exit codes: input errors (2) and resource errors (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("undefined value: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn parse(path: &std::path::Path, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            // Unreadable inputs are the caller's problem; anything else
            // (full disk, permissions on the output side) is a resource error.
            Error::Io(e) => match e.kind() {
                std::io::ErrorKind::NotFound
                | std::io::ErrorKind::InvalidData
                | std::io::ErrorKind::InvalidInput => 2,
                _ => 3,
            },
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
