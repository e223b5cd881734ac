use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] mdlp_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("cannot decode {}: {source}", path.display())]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("no usable images under {}", root.display())]
    EmptyDataset { root: PathBuf },

    #[error("dataset mixes {first} and {other} channel images ({})", path.display())]
    MixedChannels { first: usize, other: usize, path: PathBuf },

    #[error("label map {}: {message}", path.display())]
    LabelMap { path: PathBuf, message: String },

    #[error("not an index file: expected magic \"MDLP\", found {found:?}")]
    BadMagic { found: [u8; 4] },

    #[error("unsupported index version {found}, this build reads version {supported}")]
    Version { found: u32, supported: u32 },

    #[error("index truncated: {context} needs {needed} bytes at offset {offset}, {available} available")]
    Truncated {
        context: &'static str,
        offset: usize,
        needed: usize,
        available: usize,
    },

    #[error("malformed index: {0}")]
    Malformed(String),

    #[error("inconsistent entries: {0}")]
    Inconsistent(String),

    #[error("query feature has dimension {query} but the index stores dimension {index}")]
    QueryDimension { query: usize, index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 3 for I/O failures, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}
