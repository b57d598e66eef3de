use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("incomplete factorization: cofactor {cofactor} is unfactored")]
    Incomplete { cofactor: BigUint },

    #[error("{what} needs {needed} items but the cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("inversion of zero")]
    ZeroInverse,

    #[error("numeric tolerance violated: |{value} - {nearest}| > {tolerance}")]
    Tolerance { value: f64, nearest: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn cap(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::CapExceeded { what: what.into(), needed, cap }
    }

    /// True when the error stems from a factorization that ran out of budget.
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::Incomplete { .. })
    }
}
