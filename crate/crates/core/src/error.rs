use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("corpus contains no sentences")]
    EmptyCorpus,

    #[error("cosine similarity is undefined for a zero-norm vector")]
    ZeroNorm,

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("reference sentence is empty")]
    EmptyReference,

    #[error("no reference sentences supplied")]
    NoReferences,

    #[error("unknown metric `{name}`; valid metrics: {}", valid.join(", "))]
    UnknownMetric { name: String, valid: Vec<String> },

    #[error("external metric `{metric}` has no score for instance `{id}`")]
    MissingExternalScore { metric: String, id: String },

    #[error("pearson correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("bucket {bucket} has fewer than two rating levels with data")]
    InsufficientLevels { bucket: String },

    #[error("no results to report")]
    EmptyResults,

    #[error("{0}")]
    Data(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }
}
