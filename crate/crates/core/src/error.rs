use thiserror::Error;

/// Errors raised across the library. The CLI maps each kind onto an exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no bracket found for the analogical power in [{lo}, {hi}]")]
    Convergence { lo: f64, hi: f64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("unsolvable: {0}")]
    Unsolvable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("input error at line {line}: {message}")]
    Input { line: usize, message: String },

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
