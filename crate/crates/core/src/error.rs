use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain, or dimensions disagree.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A structural precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An enumeration would exceed the configured outcome budget.
    #[error("resource budget exceeded: {what} requires {required} outcomes, budget is {budget}")]
    Resource { what: String, required: u128, budget: u128 },
    /// A channel or codebook file could not be parsed or validated.
    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on the number of enumerated outcomes (sequences, matrix entries).
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Checks `radix^n <= budget`, returning the exact size.
pub(crate) fn checked_power(radix: usize, n: usize, budget: u64, what: &str) -> Result<u64> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(radix as u128);
    }
    if size > budget as u128 {
        return Err(Error::Resource {
            what: what.to_string(),
            required: size,
            budget: budget as u128,
        });
    }
    Ok(size as u64)
}
