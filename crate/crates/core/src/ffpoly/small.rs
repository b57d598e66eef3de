//! F_{q^n} with u32 element codes, backed by log/exp tables when small.
//!
//! A code is Σ c_i q^i with c_i the F_q codes of the coordinates, which is the
//! same as reading all kn F_p digits in base p. Base-field codes embed as
//! themselves.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::base::BaseField;
use super::field::{add_digits, add_one_digits, from_digits, neg_digits, to_digits, Field};
use super::poly::Poly;
use super::tower::{FieldElement, Tower};
use crate::error::{Error, Result};
use crate::ntheory::FactoredInteger;

/// Default cap on table-backed fields and on enumeration.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone)]
struct Tables {
    /// exp[i] = g^i for 0 ≤ i < 2(Q−1)
    exp: Vec<u32>,
    /// log[a] for a ≠ 0
    log: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct SmallField {
    base: BaseField,
    n: u32,
    big_q: u64,
    modulus: Poly,
    generator: u32,
    factored_order: FactoredInteger,
    tables: Option<Tables>,
    /// Absolute trace of the F_p-basis element p^j.
    trace_basis: Vec<u32>,
}

impl SmallField {
    pub fn new(tower: &Tower, table_cap: u64) -> Result<Self> {
        let big_q = tower.order_u64().filter(|&v| v <= u32::MAX as u64).ok_or_else(|| {
            Error::cap("field size for u32 codes", tower.order().to_u128().unwrap_or(u128::MAX), u32::MAX as u128)
        })?;
        let generator = tower.code(tower.generator()).to_u32().unwrap();
        let mut f = SmallField {
            base: tower.base().clone(),
            n: tower.n(),
            big_q,
            modulus: tower.top_modulus().clone(),
            generator,
            factored_order: tower.factored_order().clone(),
            tables: None,
            trace_basis: Vec::new(),
        };
        if big_q <= table_cap {
            f.tables = Some(f.build_tables());
        }
        let p = f.characteristic();
        let digits = f.base.k() * f.n;
        f.trace_basis = (0..digits)
            .map(|j| {
                let e = p.pow(j);
                let mut acc = 0;
                let mut x = e;
                for _ in 0..digits {
                    acc = f.add(acc, x);
                    x = f.pow(x, p as u64);
                }
                debug_assert!(acc < p);
                acc
            })
            .collect();
        Ok(f)
    }

    /// Tower plus small-field view in one call, with the default table cap.
    pub fn build(p: u32, k: u32, n: u32) -> Result<(Tower, SmallField)> {
        let t = Tower::build(p, k, n)?;
        let s = SmallField::new(&t, DEFAULT_TABLE_CAP)?;
        Ok((t, s))
    }

    fn build_tables(&self) -> Tables {
        let m = (self.big_q - 1) as usize;
        let mut exp = vec![0u32; 2 * m];
        let mut log = vec![0u32; self.big_q as usize];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().take(m).enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, self.generator);
        }
        debug_assert_eq!(x, 1);
        for i in 0..m {
            exp[m + i] = exp[i];
        }
        Tables { exp, log }
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let q = self.base.q();
        let pa = Poly::new(to_digits(a as u64, q, self.n as usize));
        let pb = Poly::new(to_digits(b as u64, q, self.n as usize));
        let r = pa.mulmod(&self.base, &pb, &self.modulus);
        from_digits(r.coeffs(), q) as u32
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn size(&self) -> u64 {
        self.big_q
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn factored_order(&self) -> &FactoredInteger {
        &self.factored_order
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Discrete log to the fixed generator; `a` nonzero.
    pub fn log(&self, a: u32) -> u64 {
        assert!(a != 0, "log of zero");
        match &self.tables {
            Some(t) => t.log[a as usize] as u64,
            None => {
                let mut x = 1u32;
                for i in 0..self.big_q - 1 {
                    if x == a {
                        return i;
                    }
                    x = self.mul(x, self.generator);
                }
                unreachable!("generator has full order")
            }
        }
    }

    pub fn exp(&self, i: u64) -> u32 {
        let m = self.big_q - 1;
        match &self.tables {
            Some(t) => t.exp[(i % m) as usize],
            None => self.pow(self.generator, i % m),
        }
    }

    /// β^{q^i}
    pub fn frobenius_q(&self, b: u32, i: u64) -> u32 {
        let i = i % self.n as u64;
        if b == 0 || i == 0 {
            return b;
        }
        let m = self.big_q - 1;
        match &self.tables {
            Some(t) => {
                let qi = BigUint::from(self.q()).modpow(&BigUint::from(i), &BigUint::from(m)).to_u64().unwrap();
                let e = (t.log[b as usize] as u128 * qi as u128 % m as u128) as usize;
                t.exp[e]
            }
            None => {
                let mut x = b;
                for _ in 0..i {
                    x = self.pow(x, self.q());
                }
                x
            }
        }
    }

    /// f ∘ β for f over F_q (coefficients are F_q codes).
    pub fn poly_action(&self, f: &Poly, b: u32) -> u32 {
        let mut acc = 0;
        let mut conj = b;
        for (i, &c) in f.coeffs().iter().enumerate() {
            if i > 0 {
                conj = self.frobenius_q(conj, 1);
            }
            if c != 0 {
                acc = self.add(acc, self.mul(c, conj));
            }
        }
        acc
    }

    /// Absolute trace to F_p as an integer in [0, p).
    pub fn abs_trace(&self, a: u32) -> u32 {
        let p = self.characteristic();
        let mut acc = 0u64;
        let mut x = a;
        let mut j = 0;
        while x > 0 {
            acc += (x % p) as u64 * self.trace_basis[j] as u64;
            x /= p;
            j += 1;
        }
        (acc % p as u64) as u32
    }

    /// Whether `a` is a generator of the multiplicative group.
    pub fn is_primitive(&self, a: u32) -> bool {
        if a == 0 {
            return false;
        }
        let m = self.big_q - 1;
        let primes = self.factored_order.primes().expect("complete by construction");
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                primes.iter().all(|r| num_integer::gcd(l, r.to_u64().unwrap()) == 1)
            }
            None => primes.iter().all(|r| self.pow(a, m / r.to_u64().unwrap()) != 1),
        }
    }

    pub fn to_element(&self, a: u32) -> FieldElement {
        FieldElement { coords: to_digits(a as u64, self.q(), self.n as usize) }
    }

    pub fn from_element(&self, e: &FieldElement) -> u32 {
        from_digits(&e.coords, self.q()) as u32
    }

    /// All elements in code order.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.big_q as u32
    }
}

impl Field for SmallField {
    fn order(&self) -> u64 {
        self.big_q
    }

    fn characteristic(&self) -> u32 {
        self.base.prime()
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.base.prime();
        if p == 2 {
            return a ^ b;
        }
        match &self.tables {
            Some(t) if a != 0 && b != 0 => {
                // a + b = a (1 + b/a)
                let m = (self.big_q - 1) as u32;
                let la = t.log[a as usize];
                let d = (t.log[b as usize] + m - la) % m;
                let s = add_one_digits(p, t.exp[d as usize]);
                if s == 0 {
                    0
                } else {
                    t.exp[(la + t.log[s as usize]) as usize]
                }
            }
            _ => add_digits(p, a, b),
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        neg_digits(self.base.prime(), a)
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.slow_mul(a, b),
        }
    }

    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => {
                let m = (self.big_q - 1) as usize;
                t.exp[(m - t.log[a as usize] as usize) % m]
            }
            None => self.pow(a, self.big_q - 2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(p: u32, k: u32, n: u32, cap: u64) {
        let t = Tower::build(p, k, n).unwrap();
        let f = SmallField::new(&t, cap).unwrap();
        let q = f.size() as u32;
        let step = (q / 97).max(1);
        for a in (0..q).step_by(step as usize) {
            let ea = f.to_element(a);
            assert_eq!(f.from_element(&ea), a);
            for b in (0..q).step_by((step as usize) * 3 + 1) {
                let eb = f.to_element(b);
                assert_eq!(f.to_element(f.add(a, b)), t.add(&ea, &eb));
                assert_eq!(f.to_element(f.mul(a, b)), t.mul(&ea, &eb));
                assert_eq!(f.to_element(f.sub(a, b)), t.sub(&ea, &eb));
            }
            assert_eq!(f.to_element(f.frobenius_q(a, 1)), t.frobenius_q(&ea, 1));
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn table_and_slow_paths_agree_with_tower() {
        for (p, k, n) in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (3, 2, 2), (5, 1, 4), (2, 3, 3)] {
            check(p, k, n, DEFAULT_TABLE_CAP);
            check(p, k, n, 0);
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let (_, f) = SmallField::build(3, 1, 3).unwrap();
        let mut seen = [false; 3];
        for a in f.elements() {
            seen[f.abs_trace(a) as usize] = true;
            for b in [1u32, 5, 17] {
                assert_eq!(f.abs_trace(f.add(a, b)), (f.abs_trace(a) + f.abs_trace(b)) % 3);
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn primitive_count() {
        let (_, f) = SmallField::build(2, 1, 6).unwrap();
        assert_eq!(f.elements().filter(|&a| f.is_primitive(a)).count(), 36);
    }
}
