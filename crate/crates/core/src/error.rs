use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid config field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("empty filter window")]
    EmptyWindow,

    #[error("event log error at line {line}: {reason}")]
    EventLog { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SimError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        SimError::Validation {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
