use thiserror::Error;

use crate::solve::Certificate;

/// Errors raised by scenario constructions and solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two morphisms or relations do not compose.
    #[error("composition error: {0}")]
    Composition(String),
    /// A precondition on the inputs (such as matching marginals) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An object failed validation; the message carries the report.
    #[error("validation failed: {0}")]
    Invalid(String),
    /// An enumeration exceeded its configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A model expected to be noncontextual is contextual.
    #[error("model is contextual")]
    Contextual(Box<Certificate>),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
