//! Finite-field tower arithmetic, polynomials and their factorization.

pub mod base;
pub mod encode;
pub mod factor;
pub mod field;
pub mod poly;
pub mod small;
pub mod tower;
pub mod xn1;

pub use base::{BaseField, PrimeField};
pub use factor::{factor, is_irreducible, FactoredPoly};
pub use field::Field;
pub use poly::Poly;
pub use small::{SmallField, DEFAULT_TABLE_CAP};
pub use tower::{FieldElement, Tower};
pub use xn1::{factor_xn_minus_1, xn_shape, XnShape};
