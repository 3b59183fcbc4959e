use thiserror::Error;

#[derive(Debug, Error)]
pub enum GbsmError {
    /// An argument fell outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// Inputs that are individually valid but mutually inconsistent.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("invalid config at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GbsmError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GbsmError::Domain(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        GbsmError::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            GbsmError::Domain(_) => "domain",
            GbsmError::Fit(_) => "fit",
            GbsmError::Consistency(_) => "consistency",
            GbsmError::Config { .. } => "config",
            GbsmError::Parse(_) => "parse",
            GbsmError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, GbsmError>;
