use thiserror::Error;

/// Every failure the library reports. Decoders never return a silently wrong
/// word: when the received word is inconsistent with the stored residues they
/// return [`Error::NotDecodable`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} is outside the alphabet of size {q}")]
    InvalidSymbol { symbol: u64, q: u32 },
    #[error("burst exceeds sequence (start {start}, length {len}, sequence length {n})")]
    BurstOutOfRange { start: usize, len: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: String, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not decodable: {0}")]
    NotDecodable(String),
    #[error("budget exceeded: {what} needs {required} elements, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn undecodable(msg: impl Into<String>) -> Self {
        Error::NotDecodable(msg.into())
    }

    pub(crate) fn length(expected: impl Into<String>, actual: usize) -> Self {
        Error::LengthMismatch {
            expected: expected.into(),
            actual,
        }
    }
}
