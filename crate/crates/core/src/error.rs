use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("metric violation: {0}")]
    MetricViolation(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("unsupported map: {0}")]
    UnsupportedMap(String),
    #[error("union graph is not strongly connected at delta = {delta}")]
    NotTransitive { delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
