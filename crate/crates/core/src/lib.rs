//! Primitive normal elements with primitive rational-function images:
//! exact arithmetic, character sums, sieve criteria and brute-force oracles.

pub mod certify;
pub mod charsums;
pub mod error;
pub mod ffpoly;
pub mod freeness;
pub mod ntheory;
pub mod search;
pub mod upsilon;

pub use error::{Error, Result};
