use thiserror::Error;

/// Errors raised by the simulator and its analytic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An experiment configuration cannot be run.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
