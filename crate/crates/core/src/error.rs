use std::path::PathBuf;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's domain (empty sample, missing
    /// memory size, nonpositive duration, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A file or record could not be parsed.
    #[error("format error in {context}: {message}")]
    Format { context: String, message: String },

    /// A model file was written by an incompatible format version.
    #[error("incompatible model file: format version {found}, this build reads version {expected}")]
    IncompatibleVersion { found: u32, expected: u32 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
