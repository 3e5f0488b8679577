use thiserror::Error;

/// Errors raised by the library.
///
/// A search that proves non-existence returns `Ok(None)`; running out of a
/// resource budget is always reported as [`Error::ResourceCap`] and never as
/// a negative answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("graph is not cubic")]
    NotCubic,

    #[error("graph is not flow-admissible")]
    NotFlowAdmissible,

    #[error("graph contains a long barbell")]
    LongBarbell,

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("resource cap exceeded: {what} (limit {limit})")]
    ResourceCap { what: &'static str, limit: u64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
