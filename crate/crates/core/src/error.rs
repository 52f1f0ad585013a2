use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
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

    #[error("invalid format: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("field `{0}` is not part of the index schema")]
    UnknownField(String),

    #[error("unknown document `{0}`")]
    UnknownDocument(String),

    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),

    #[error("`{0}` has no embedding vector")]
    MissingEmbedding(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("clicked document `{0}` is not part of the interleaved ranking")]
    ClickOutsideRanking(String),

    #[error("run and qrels share no query")]
    NoOverlappingQueries,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
