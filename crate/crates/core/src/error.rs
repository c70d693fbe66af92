use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps onto a CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("non-integrable singularity: declared endpoint exponent {0} <= -1")]
    NonIntegrableSingularity(f64),
    #[error("not transient: {0}")]
    Recurrent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cost guard: {0}")]
    CostGuard(String),
    #[error("memory guard: {0}")]
    MemoryGuard(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) => 2,
            Error::CostGuard(_) | Error::MemoryGuard(_) => 4,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
