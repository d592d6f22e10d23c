//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by body construction, geometric predicates, and estimators.
#[derive(Debug, Error)]
pub enum GeomError {
    /// Input files or descriptions that could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A structural invariant of a body, cone, region, or configuration is violated.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A nesting precondition (such as `G` strictly inside `K`) failed.
    #[error("containment violation: {0}")]
    Containment(String),

    /// A numerical guard tripped (near-equatorial projection, degenerate
    /// quadric, no pointedness witness, ...).
    #[error("numerical guard: {0}")]
    Numerical(String),

    /// The operation is not defined for this body representation.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

impl GeomError {
    /// Process exit status used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            GeomError::Parse(_) => 2,
            GeomError::Invariant(_) | GeomError::Unsupported(_) => 3,
            GeomError::Containment(_) => 4,
            GeomError::Numerical(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
