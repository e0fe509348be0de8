use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes. The CLI maps them onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Integrity,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 1,
            ErrorClass::Data => 2,
            ErrorClass::Integrity => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}:{line}: {message}", file.display())]
    Parse {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: malformed XML: {message}", file.display())]
    Xml { file: PathBuf, message: String },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("invalid sense key `{key}`: {reason}")]
    InvalidSenseKey { key: String, reason: &'static str },

    #[error("dimension mismatch for `{key}`: expected {expected}, found {found}")]
    DimensionMismatch { key: String, expected: usize, found: usize },

    #[error("non-finite vector component for `{key}`")]
    NonFinite { key: String },

    #[error("uncoverable lexname(s): {}", .0.join(", "))]
    UncoverableLexname(Vec<String>),

    #[error("unscorable instance `{id}`: {reason}")]
    UnscorableInstance { id: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Argument(_) => ErrorClass::Usage,
            Error::Integrity(_) | Error::UncoverableLexname(_) => ErrorClass::Integrity,
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        let path = path.as_ref().to_path_buf();
        if source.kind() == io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub(crate) fn parse(file: impl AsRef<Path>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.as_ref().to_path_buf(),
            line,
            message: message.into(),
        }
    }
}
