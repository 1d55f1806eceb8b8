use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A computation would materialize more entries than the configured cap allows.
    #[error("resource cap exceeded: {what} needs {requested} entries, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        cap: u64,
    },

    /// An input value is malformed.
    #[error("invalid input: {0}")]
    Validation(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of the operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested parameters are outside the range where a closed form is proved.
    #[error("out of range: {0}")]
    Range(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
