use thiserror::Error;

use crate::moments::RegimeKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("wrong regime: expected {expected:?}, couplings are {found:?}")]
    WrongRegime {
        expected: RegimeKind,
        found: RegimeKind,
    },

    #[error("closed-form moments are not defined in the {0:?} regime")]
    UnsupportedRegime(RegimeKind),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that come from the filesystem rather than from
    /// the inputs or the numerics.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
