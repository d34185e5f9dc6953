use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("relative error undefined: reference matrix has no ones")]
    UndefinedRatio,
    #[error("size bound exceeded: {size} > {bound}")]
    Bound { size: usize, bound: usize },
    #[error("sets are incompatible with the tree")]
    Incompatible,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
