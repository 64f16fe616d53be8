use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad argument: out-of-range index, malformed pattern, non-finite angle.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// A register or circuit too large for the dense simulator.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// Op `index` cannot be written in the OpenQASM 2.0 subset.
    #[error("cannot export op {index} ({op}) to OpenQASM 2.0")]
    Export { index: usize, op: String },

    /// Normalization drifted past tolerance; indicates a kernel bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}
