use std::path::PathBuf;

/// Error type shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("direction `{direction}` is not valid for a {kind} network")]
    DirectionMismatch { direction: String, kind: String },

    #[error("networks do not share directedness")]
    DirectednessMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("feature row has {got} columns but the model expects {expected}")]
    SchemaMismatch { got: usize, expected: usize },

    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
