use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GmError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capability not supported by space `{space}`: {capability}")]
    Capability {
        space: &'static str,
        capability: &'static str,
    },
    #[error("kernel is not positive definite: radicand {radicand} below tolerance")]
    NotPositiveDefinite { radicand: f64 },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl GmError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        GmError::InvalidInput(msg.into())
    }

    /// Short machine-readable tag, used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            GmError::InvalidInput(_) => "invalid_input",
            GmError::Capability { .. } => "capability",
            GmError::NotPositiveDefinite { .. } => "not_positive_definite",
            GmError::Resource(_) => "resource",
        }
    }
}

pub type Result<T, E = GmError> = std::result::Result<T, E>;
