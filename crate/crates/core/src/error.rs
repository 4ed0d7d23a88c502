use thiserror::Error;

/// Errors raised by the link model and the optimizers built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario or solver configuration violates one of its invariants.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Two computations that must agree did not.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
