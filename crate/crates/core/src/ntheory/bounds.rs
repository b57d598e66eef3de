//! The A_t family of bounds on square-free divisor counts, and caps on the
//! number of primes of a given class that fit below a bound.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{for_each_prime_below, is_prime_u64};

/// ∏_{℘ < 2^t, ℘ ≠ excluded} 2/℘^{1/t}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundFamily {
    pub t: f64,
    pub excluded_prime: Option<u64>,
    pub value: f64,
    pub ln_value: f64,
}

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn a_t_bound(t: f64, excluded_prime: Option<u64>) -> BoundFamily {
    assert!(t > 0.0, "t must be positive");
    let limit = t.exp2();
    let mut acc = NeumaierSum::default();
    let ln2 = std::f64::consts::LN_2;
    for_each_prime_below(limit.ceil() as u64, |p| {
        if (p as f64) < limit && Some(p) != excluded_prime {
            acc.add(ln2 - (p as f64).ln() / t);
        }
    });
    let ln_value = acc.value();
    BoundFamily { t, excluded_prime, value: ln_value.exp(), ln_value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeClass {
    All,
    OddGreaterThan13,
    CongruentOneMod3,
}

impl PrimeClass {
    pub fn contains(self, p: u64) -> bool {
        match self {
            PrimeClass::All => true,
            PrimeClass::OddGreaterThan13 => p > 13,
            PrimeClass::CongruentOneMod3 => p % 3 == 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeClassCap {
    pub r_max: usize,
    /// Σ 1/p over the first r_max primes of the class.
    pub inverse_sum: BigRational,
    pub product: BigUint,
}

impl PrimeClassCap {
    pub fn inverse_sum_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.inverse_sum.to_f64().unwrap_or(f64::NAN)
    }
}

/// Largest r with P_r ≤ bound, P_r the product of the first r primes of `class`.
pub fn prime_class_cap(bound: &BigUint, class: PrimeClass) -> PrimeClassCap {
    let mut product = BigUint::one();
    let mut inverse_sum = BigRational::zero();
    let mut r = 0;
    let mut p = 1u64;
    loop {
        p += 1;
        if !is_prime_u64(p) || !class.contains(p) {
            continue;
        }
        let next = &product * p;
        if &next > bound {
            break;
        }
        product = next;
        inverse_sum += BigRational::new(1.into(), p.into());
        r += 1;
    }
    PrimeClassCap { r_max: r, inverse_sum, product }
}

/// For every prime ℘ ≠ 3 dividing q²+q+1: ℘ ≡ 1 (mod 3) and ℘ ∤ q − 1.
pub fn q2q1_divisors_ok(q: u64) -> crate::error::Result<bool> {
    let m = q as u128 * q as u128 + q as u128 + 1;
    let f = super::factor::factor_integer(&BigUint::from(m), super::factor::DEFAULT_BUDGET)?;
    for p in f.primes()? {
        let p: u64 = p.try_into().expect("prime factor of q^2+q+1 fits u64 for q < 2^32");
        if p == 3 {
            continue;
        }
        if p % 3 != 1 || (q - 1).is_multiple_of(p) {
            return Ok(false);
        }
    }
    Ok(true)
}
