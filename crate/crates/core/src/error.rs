use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Element, norm or descriptor shapes disagree.
    #[error("shape error: {0}")]
    Shape(String),
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The anchor table is too shallow for the query.
    #[error("extend table: depth {required_depth} required (table has {depth})")]
    ExtendTable { required_depth: usize, depth: usize },
    /// A stored table does not satisfy the construction's recurrence.
    #[error("corrupted table: {0}")]
    CorruptedTable(String),
    #[error("unsupported table version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    /// Counterexample hypotheses `0 < v < 1/2` not satisfied.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
