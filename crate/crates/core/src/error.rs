use thiserror::Error;

/// Failure classes shared by every module. The CLI maps each class onto a
/// distinct exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The request needs more levels or more materialized symbols than are available.
    #[error("capacity exceeded: {what} (required {required}, allowed {allowed})")]
    Capacity {
        what: String,
        required: String,
        allowed: String,
    },

    /// A schedule or parameter violates a structural constraint.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A quantity is mathematically undefined for the given arguments.
    #[error("undefined: {0}")]
    Undefined(String),
}

impl Error {
    pub fn capacity(
        what: impl Into<String>,
        required: impl ToString,
        allowed: impl ToString,
    ) -> Self {
        Error::Capacity {
            what: what.into(),
            required: required.to_string(),
            allowed: allowed.to_string(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
