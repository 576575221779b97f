use thiserror::Error;

/// Errors produced by the library. The CLI maps these onto its exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("periods are not pairwise coprime: {0:?}")]
    Coprimality(Vec<usize>),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("inconsistent basis: {0}")]
    InconsistentBasis(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
