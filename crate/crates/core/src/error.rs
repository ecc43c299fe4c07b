use thiserror::Error;

/// Errors raised by the threshold toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative procedure failed to produce a trustworthy value.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A discretized field violates a grid invariant (decay at the boundary,
    /// support escaping the window after rescaling, ...).
    #[error("grid error: {0}")]
    Grid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn grid(msg: impl Into<String>) -> Self {
        Error::Grid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
