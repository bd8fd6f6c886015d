use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied parameters (bad spec, out-of-range fraction, unknown preset).
    #[error("configuration error: {0}")]
    Config(String),

    /// A mathematical precondition does not hold (empty graph, index out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is inconsistent with the model it claims to describe.
    #[error("data error: {0}")]
    Data(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Prefixes the message with `context` (e.g. which sweep point failed).
    pub fn context(self, context: impl std::fmt::Display) -> Self {
        match self {
            Error::Config(m) => Error::Config(format!("{context}: {m}")),
            Error::Domain(m) => Error::Domain(format!("{context}: {m}")),
            Error::Data(m) => Error::Data(format!("{context}: {m}")),
            other => other,
        }
    }

    /// Process exit code for this error: 1 for usage/configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Domain(_) | Error::Data(_) | Error::Parse { .. } | Error::Io { .. } => 2,
        }
    }
}
