use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ragged input: line {line} has {found} entries, expected {expected}")]
    Ragged {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("negative entry at ({0},{1})")]
    Negative(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported pattern: {0}")]
    Unsupported(String),
    #[error("unbounded region: {0}")]
    Unbounded(String),
    #[error("infeasible parameter: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
