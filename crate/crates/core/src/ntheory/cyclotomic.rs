//! Cyclotomic values Φ_d(x) and the pre-split of q^n − 1.

use std::time::Duration;

use num_bigint::BigUint;
use num_traits::One;

use super::factor::{factor_integer, factor_u64, FactoredInteger};
use super::primes::prime_power;
use crate::error::{Error, Result};

/// Φ_d(x) = ∏_{e | d} (x^e − 1)^{μ(d/e)}.
pub fn cyclotomic_value(d: u64, x: &BigUint) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::domain("cyclotomic index must be positive"));
    }
    let fd = factor_u64(d)?;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in fd.divisors()? {
        let e: u64 = e.try_into().unwrap();
        let mu = factor_u64(d / e)?.moebius()?;
        if mu == 0 {
            continue;
        }
        let term = x.pow(e as u32) - 1u32;
        if mu > 0 {
            num *= term;
        } else {
            den *= term;
        }
    }
    Ok(num / den)
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).flat_map(|d| [d, n / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Factors q^n − 1 by factoring each cyclotomic piece with its own budget.
///
/// When q = p^k the pieces are Φ_d(p) for d | kn, which are finer than Φ_d(q).
pub fn cyclotomic_split(q: u64, n: u32, budget_per_piece: Duration) -> Result<FactoredInteger> {
    if q < 2 || n == 0 {
        return Err(Error::domain(format!("cyclotomic_split needs q >= 2 and n >= 1, got ({q},{n})")));
    }
    let (base, exp) = match prime_power(q) {
        Some((p, k)) => (p, k as u64 * n as u64),
        None => (q, n as u64),
    };
    let x = BigUint::from(base);
    let mut acc = FactoredInteger::one();
    for d in divisors_u64(exp) {
        let piece = cyclotomic_value(d, &x)?;
        if piece.is_one() {
            continue;
        }
        acc = acc.multiply(&factor_integer(&piece, budget_per_piece)?);
    }
    debug_assert_eq!(acc.value(), &(BigUint::from(q).pow(n) - 1u32));
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::factor::{Certainty, DEFAULT_BUDGET};

    #[test]
    fn values() {
        let two = BigUint::from(2u32);
        let v: Vec<u64> = (1..=6).map(|d| cyclotomic_value(d, &two).unwrap().try_into().unwrap()).collect();
        assert_eq!(v, vec![1, 3, 7, 5, 31, 3]);
    }

    #[test]
    fn split_examples() {
        let f = cyclotomic_split(2, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(f.value(), &BigUint::from(15u32));
        assert_eq!(f.factors().len(), 2);
        let f = cyclotomic_split(2, 1, DEFAULT_BUDGET).unwrap();
        assert!(f.factors().is_empty());
        for (q, n) in [(4u64, 6u32), (9, 5), (10, 6), (8, 3), (25, 24)] {
            let f = cyclotomic_split(q, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(f.value(), &(BigUint::from(q).pow(n) - 1u32));
            assert_ne!(f.certainty(), Certainty::Incomplete);
        }
    }

    #[test]
    fn split_23_22() {
        let f = cyclotomic_split(23, 22, DEFAULT_BUDGET).unwrap();
        assert_eq!(f.value(), &(BigUint::from(23u32).pow(22) - 1u32));
        assert_eq!(f.certainty(), Certainty::Proven);
        let direct = factor_integer(f.value(), DEFAULT_BUDGET).unwrap();
        assert_eq!(direct.factors(), f.factors());
    }
}
