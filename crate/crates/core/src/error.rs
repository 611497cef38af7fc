use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The caller handed in data that violates a documented precondition.
    #[error("input error: {0}")]
    Input(String),

    /// A computed object failed an identity that the construction guarantees.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("integer overflow during {0}")]
    Overflow(&'static str),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
