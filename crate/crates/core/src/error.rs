use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("prime {p} excluded: {reason}")]
    ExcludedPrime { p: u64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("density undefined: {0}")]
    UndefinedDensity(String),

    #[error("matrix has no finite order up to the search cap {cap}")]
    InfiniteOrder { cap: u32 },

    #[error("singular matrix")]
    Singular,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
