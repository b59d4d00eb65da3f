use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("instance too large for exhaustive search: n = {n} exceeds limit {max}")]
    Capacity { n: usize, max: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("external solver failed: {0}")]
    Solver(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
