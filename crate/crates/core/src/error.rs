use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the analytic domain (cut, pole, exclusion zone, bad sign).
    #[error("domain error: {0}")]
    Domain(String),

    /// A search completed without locating what it was asked for.
    #[error("not found: {reason}")]
    NotFound {
        reason: String,
        /// Scan samples `(abscissa, value)` gathered before giving up.
        trace: Vec<(f64, f64)>,
    },

    /// Quadrature or iteration did not converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Linear algebra found a rank deficiency that contradicts the model.
    #[error("degenerate system: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
