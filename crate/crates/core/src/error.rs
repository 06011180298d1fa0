use thiserror::Error;

/// Everything that can go wrong while building, checking or searching games.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid value: {0}")]
    Validation(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{stage}: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format { line, msg: msg.into() }
    }

    /// Tags the error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
