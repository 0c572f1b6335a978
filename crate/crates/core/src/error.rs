use thiserror::Error;

/// Errors raised by the library. Property failures (non-equitable partitions,
/// non-distance-regular graphs, ...) are not errors: they come back as
/// witnesses inside the corresponding report types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("singular recursion at level {level}: {detail}")]
    Singularity { level: usize, detail: String },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("comparison undecidable after {steps} refinement steps")]
    Undecidable { steps: u32 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
