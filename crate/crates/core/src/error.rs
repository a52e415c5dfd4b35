use thiserror::Error;

/// Failures raised by the numerical and physical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data violate a structural requirement (Hermiticity, unitarity, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An iterative or adaptive method stopped before reaching its target accuracy.
    #[error("{what} did not converge: estimate {estimate:e}, error estimate {error:e}")]
    NonConvergence { what: String, estimate: f64, error: f64 },

    /// A Fock-space computation needed more photons than the truncation allows.
    #[error("truncation overflow: {0}")]
    Truncation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for failures of a numerical method rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
