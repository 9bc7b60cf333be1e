use thiserror::Error;

/// Errors raised by the algebra, jet and ledger routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: String, found: String },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("truncation cap too small: {0}")]
    CapTooSmall(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("jet is not on the variety: {0}")]
    NotInJetSpace(String),

    #[error("arc lies in the critical locus at the working cap: all maximal minors vanish to order >= {0}")]
    CriticalArc(u32),

    #[error("invalid input data: {0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    /// True for failures caused by a computation budget rather than by bad input.
    pub fn is_resource_failure(&self) -> bool {
        matches!(
            self,
            Error::ResourceLimit(_) | Error::CapTooSmall(_) | Error::CriticalArc(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
