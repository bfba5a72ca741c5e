use std::io;

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration or brute-force search would exceed its configured cap.
    #[error("capacity exceeded: {what} needs {needed} but the cap is {cap}")]
    Capacity { what: String, needed: u128, cap: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A precondition of an analysis (not of the call signature) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The premise of an axiom is unmet, so testing it would be vacuous.
    #[error("vacuous scenario: {0}")]
    Vacuous(String),

    /// A privilege graph has a strongly connected component of three or more outcomes.
    #[error("cyclically privileged issue {issue}: component {component:?} has {} outcomes", component.len())]
    Cyclic { issue: String, component: Vec<usize> },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::Capacity {
            what: what.into(),
            needed,
            cap,
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
