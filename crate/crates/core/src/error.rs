use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown symbol, overlapping sets, bad JSON shape).
    #[error("input error: {0}")]
    Input(String),
    /// A ball grew past the configured vertex budget.
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    /// A construction's hypothesis failed (e.g. the Følner inequality).
    #[error("rejected: {0}")]
    Rejected(String),
    /// An operation's precondition does not hold for this instance.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
