//! Dense little-endian polynomials over any [`Field`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::field::Field;

/// Coefficients little-endian, no trailing zeros. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<u32>,
}

/// Degree first, then coefficients from the top down. At a fixed degree this
/// is numeric order of the code Σ c_i q^i.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::encode::format_poly(self))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    /// x
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u32, deg: usize) -> Self {
        let mut v = vec![0; deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    /// x^n − 1
    pub fn xn_minus_one<F: Field>(field: &F, n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[0] = field.neg(1);
        v[n] = 1;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg 0 = 0 for convenience in size computations.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic<F: Field>(&self, f: &F) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = f.inv(self.lead());
        self.scale(f, inv)
    }

    pub fn scale<F: Field>(&self, f: &F, c: u32) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add<F: Field>(&self, f: &F, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub<F: Field>(&self, f: &F, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg<F: Field>(&self, f: &F) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn mul<F: Field>(&self, f: &F, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(out)
    }

    pub fn pow<F: Field>(&self, f: &F, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(f, &b);
            }
        }
        acc
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem<F: Field>(&self, f: &F, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let inv = f.inv(d.lead());
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let c = f.mul(c, inv);
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = i - dd + j;
                    r[k] = f.sub(r[k], f.mul(c, b));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem<F: Field>(&self, f: &F, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    /// Exact division; panics in debug builds when `d` does not divide.
    pub fn div_exact<F: Field>(&self, f: &F, d: &Poly) -> Poly {
        let (q, r) = self.divrem(f, d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides<F: Field>(&self, f: &F, other: &Poly) -> bool {
        other.rem(f, self).is_zero()
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd<F: Field>(&self, f: &F, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// (g, s, t) with s·self + t·other = g monic.
    pub fn ext_gcd<F: Field>(&self, f: &F, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(f, inv), s0.scale(f, inv), t0.scale(f, inv))
    }

    pub fn mulmod<F: Field>(&self, f: &F, other: &Poly, m: &Poly) -> Poly {
        self.mul(f, other).rem(f, m)
    }

    pub fn powmod<F: Field>(&self, f: &F, e: &BigUint, m: &Poly) -> Poly {
        let base = self.rem(f, m);
        let mut acc = Poly::one().rem(f, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(f, &acc, m);
            if e.bit(i) {
                acc = acc.mulmod(f, &base, m);
            }
        }
        acc
    }

    pub fn powmod_u64<F: Field>(&self, f: &F, e: u64, m: &Poly) -> Poly {
        self.powmod(f, &BigUint::from(e), m)
    }

    pub fn derivative<F: Field>(&self, f: &F) -> Poly {
        let p = f.characteristic() as usize;
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| {
                    let m = (i % p) as u32;
                    // i·c as repeated addition of c, i < p
                    let mut acc = 0;
                    for _ in 0..m {
                        acc = f.add(acc, c);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval<F: Field>(&self, f: &F, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// For f = g(x^p): returns h with h^p = f (coefficient-wise p-th roots).
    pub fn pth_root<F: Field>(&self, f: &F) -> Poly {
        let p = f.characteristic() as usize;
        Poly::new(self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect())
    }

    /// Monic polynomials of exact degree `d`, in increasing order, as codes.
    pub fn monic_from_index(q: u64, d: usize, index: u64) -> Poly {
        let mut v = super::field::to_digits(index, q, d);
        v.push(1);
        Poly::new(v)
    }

    /// Polynomial with coefficient vector given by base-q digits of `code`.
    pub fn from_code(q: u64, mut code: u64) -> Poly {
        let mut v = Vec::new();
        while code > 0 {
            v.push((code % q) as u32);
            code /= q;
        }
        Poly::new(v)
    }
}

/// Product of a list of polynomials.
pub fn product<'a, F: Field>(f: &F, it: impl IntoIterator<Item = &'a Poly>) -> Poly {
    it.into_iter().fold(Poly::one(), |acc, p| acc.mul(f, p))
}

/// Lagrange interpolation through distinct points `xs`.
pub fn interpolate<F: Field>(f: &F, xs: &[u32], ys: &[u32]) -> Poly {
    assert_eq!(xs.len(), ys.len());
    let mut out = Poly::zero();
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi == 0 {
            continue;
        }
        let mut basis = Poly::one();
        let mut denom = 1u32;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                basis = basis.mul(f, &Poly::new(vec![f.neg(xj), 1]));
                denom = f.mul(denom, f.sub(xi, xj));
            }
        }
        out = out.add(f, &basis.scale(f, f.div(yi, denom)));
    }
    out
}
