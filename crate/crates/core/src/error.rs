use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: element out of range ({value} >= {domain_size})")]
    OutOfRange {
        line: usize,
        value: usize,
        domain_size: usize,
    },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded { what: String, value: u128, cap: u128 },

    #[error("operation `{name}` is not canonical: {detail}")]
    NotCanonical { name: String, detail: String },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("equalizer failure: {0}")]
    Equalizer(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn cap(what: impl Into<String>, value: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            value,
            cap,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
