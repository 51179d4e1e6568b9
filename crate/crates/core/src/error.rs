use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid arguments: mismatched ambient data, out-of-range indices,
    /// non-prime moduli, non-tame primes.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A mathematical precondition failed (zero series has no highest term,
    /// no admissible cut pair exists, ...).
    #[error("{0}")]
    Domain(String),

    /// The answer depends on terms discarded by truncation.
    #[error("inconclusive below truncation degree {truncation}: {message}")]
    Inconclusive { truncation: usize, message: String },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command line tool.
    ///
    /// 1 is reserved for "checked property is false", which is reported
    /// through `Domain`.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse { .. } => 2,
            Error::Domain(_) => 1,
            Error::Inconclusive { .. } => 3,
        }
    }
}
