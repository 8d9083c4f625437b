//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the exact engine.
///
/// `Domain` marks a violated mathematical precondition, `Resource` a guard
/// against exponential blowups, and `NoFit` the (non-bug) outcome of a
/// discovery attempt whose ansatz cannot reproduce the data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("no fit: {0}")]
    NoFit(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn no_fit(msg: impl Into<String>) -> Self {
        Error::NoFit(msg.into())
    }
}
