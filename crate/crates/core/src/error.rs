use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid circuit: {0}")]
    Invalid(String),
    #[error("{what} cap exceeded (limit {limit})")]
    CapExceeded { what: &'static str, limit: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("unsupported circuit shape: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl Error {
    pub fn cap(what: &'static str, limit: impl ToString) -> Self {
        Error::CapExceeded { what, limit: limit.to_string() }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
