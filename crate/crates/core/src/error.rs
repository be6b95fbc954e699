use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input violates a stated structural or range invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// A numerical procedure failed to reach its accuracy target.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A size or enumeration guard was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Fixed-point iteration ran out of iterations; carries the increment history.
    #[error("no convergence after {iterations} iterations (last increment {last_increment:e})")]
    MaxIterExceeded {
        iterations: usize,
        last_increment: f64,
        history: Vec<f64>,
    },
    /// Fixed-point iterates blew up.
    #[error("iteration diverged at step {iteration} (sup norm {norm:e})")]
    Diverged { iteration: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
