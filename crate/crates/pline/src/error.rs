use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A ring spec that cannot be turned into a ring.
    #[error("ring construction: {0}")]
    Construction(String),

    /// A value outside the domain of an operation (non-unit inverse, inadmissible pair, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs something the ring does not offer, such as enumeration.
    #[error("capability error: {0}")]
    Capability(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An identity that must hold by construction did not. Always a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("budget `{name}` exceeded: needed {needed}, limit {limit}")]
    Budget {
        name: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
