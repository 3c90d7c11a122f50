use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear solve or factorization broke down.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The candidate enumeration would exceed the configured row budget.
    #[error(
        "resource limit: about {estimated:.3e} candidate rows needed, cap is {cap:.3e}; \
         lower n or p, or raise the cap"
    )]
    Resource { estimated: f64, cap: f64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
