//! The field interface shared by the base field F_q and the small top field.
//!
//! Elements are `u32` codes: a vector of F_p digits d_j read as Σ d_j p^j.
//! Code 0 is zero and code 1 is one at every level.

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub trait Field: Send + Sync {
    /// Number of elements.
    fn order(&self) -> u64;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    fn checked_inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.inv(a))
        }
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn pow_big(&self, a: u32, e: &BigUint) -> u32 {
        let mut acc = 1u32;
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    /// The unique b with b^p = a.
    fn pth_root(&self, a: u32) -> u32 {
        self.pow(a, self.order() / self.characteristic() as u64)
    }

    /// log_p of the order.
    fn prime_degree(&self) -> u32 {
        let p = self.characteristic() as u64;
        let mut q = self.order();
        let mut d = 0;
        while q > 1 {
            q /= p;
            d += 1;
        }
        d
    }
}

/// Digitwise base-p addition of two codes.
#[inline]
pub fn add_digits(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u32;
    let mut scale = 1u32;
    while a > 0 || b > 0 {
        let d = (a % p + b % p) % p;
        out += d * scale;
        a /= p;
        b /= p;
        scale = scale.wrapping_mul(p);
    }
    out
}

/// Digitwise base-p negation.
#[inline]
pub fn neg_digits(p: u32, mut a: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let mut out = 0u32;
    let mut scale = 1u32;
    while a > 0 {
        let d = (p - a % p) % p;
        out += d * scale;
        a /= p;
        scale = scale.wrapping_mul(p);
    }
    out
}

/// `a + 1` by bumping the lowest digit.
#[inline]
pub fn add_one_digits(p: u32, a: u32) -> u32 {
    let d = a % p;
    if d + 1 == p {
        a - d
    } else {
        a + 1
    }
}

pub fn to_digits(mut a: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((a % base) as u32);
        a /= base;
    }
    out
}

pub fn from_digits(d: &[u32], base: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * base + x as u64)
}
