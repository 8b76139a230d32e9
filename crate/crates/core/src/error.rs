use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A tag that could not be applied to a token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("token {index} (`{token}`): cannot apply {tag}: {reason}")]
pub struct TagApplicationError {
    pub index: usize,
    pub token: String,
    pub tag: String,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("line {line}: malformed tag `{tag}`: {reason}")]
    MalformedTag {
        line: usize,
        tag: String,
        reason: String,
    },

    #[error("line {line}: duplicate tag `{tag}`")]
    DuplicateTag { line: usize, tag: String },

    #[error("tagset does not contain {0}")]
    MissingTag(&'static str),

    #[error("invalid token `{0}`: tokens are non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("source sentence is empty")]
    EmptySource,

    #[error("length mismatch: {expected} source tokens but {found} labels")]
    LengthMismatch { expected: usize, found: usize },

    #[error(transparent)]
    TagApplication(#[from] TagApplicationError),

    #[error("{file} line {line}: {reason}")]
    Data {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("checksum mismatch for {file}: manifest says {expected}, found {found}")]
    Checksum {
        file: String,
        expected: String,
        found: String,
    },

    #[error("invalid noise profile: {0}")]
    Profile(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("training diverged at step {step}: loss is {loss}")]
    Divergence { step: usize, loss: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
