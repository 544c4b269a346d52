use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied inputs that violate an operation's preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// A structural invariant of an input value does not hold.
    #[error("invalid structure: {}", .0.join("; "))]
    Invalid(Vec<String>),

    /// An enumeration or search would exceed a configured bound.
    #[error("resource bound `{bound}` exceeded: {detail}")]
    Resource { bound: &'static str, detail: String },

    /// The operation is not defined for this representation.
    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
