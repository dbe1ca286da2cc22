use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("invalid committee: {0}")]
    InvalidCommittee(String),

    #[error("invalid swap ({out} -> {add}): {reason}")]
    InvalidSwap {
        out: usize,
        add: usize,
        reason: String,
    },

    #[error("scripted swap {step} rejected: {reason}")]
    ScriptedSwapRejected { step: usize, reason: String },

    #[error("delta({j}, {k}) is undefined: need 1 <= j < k")]
    UndefinedDelta { j: usize, k: usize },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("gamma {gamma} too small: step {step} observed delta {observed}")]
    GammaTooSmall {
        step: usize,
        gamma: String,
        observed: String,
    },

    #[error("enumeration of {required} committees exceeds cap {cap}")]
    EnumerationCap { required: u128, cap: u128 },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("csv schema mismatch: {0}")]
    Schema(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
