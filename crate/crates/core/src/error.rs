use thiserror::Error;

/// Errors produced by solvers and constructors in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid, parameter or scenario configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A field picked up a NaN or infinity while stepping.
    #[error("solver diverged at step {step}: {what}")]
    Diverged { step: usize, what: String },

    /// An operation needs more recorded data than the series holds.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
