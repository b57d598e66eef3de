//! Integer number theory: primes, factorization, multiplicative functions,
//! cyclotomic splitting and the A_t bounds.

pub mod bounds;
pub mod cyclotomic;
mod ecm;
pub mod factor;
pub mod mont;
pub mod primality;
pub mod primes;

pub use bounds::{a_t_bound, prime_class_cap, BoundFamily, PrimeClass, PrimeClassCap};
pub use cyclotomic::{cyclotomic_split, cyclotomic_value};
pub use factor::{factor_integer, factor_u64, Certainty, FactoredInteger, DEFAULT_BUDGET};
pub use primes::{is_prime_u64, prime_power, prime_powers_in};
