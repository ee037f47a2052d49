use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("too many malformed lines in {path}: {malformed} of {total} ({first_error})")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
        first_error: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient history: need data through {needed}, index covers [{covered_from}, {covered_to}]")]
    InsufficientHistory {
        needed: i64,
        covered_from: i64,
        covered_to: i64,
    },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("no non-empty documents to fit")]
    EmptyDocuments,

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unsupported format: {0}")]
    Format(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
