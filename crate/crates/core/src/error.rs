use crate::optimizer::PIStrategy;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violated an invariant before any computation ran.
    #[error("config error: {0}")]
    Config(String),

    /// An operation was called at a point where its preconditions fail
    /// (e.g. a derivative requested at a boundary optimum).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A signal probability of exactly 0 or 1 made a likelihood ratio
    /// undefined.
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    /// An iterative solver failed to converge; carries the last iterate.
    #[error("numeric failure: {message} (last iterate: k_a={}, k_g={}, n={})",
            last.k_a, last.k_g, last.n_ra)]
    NonConvergence {
        message: String,
        last: Box<PIStrategy>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
