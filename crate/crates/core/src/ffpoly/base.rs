//! The prime field F_p and the base field F_q = F_p[y]/(m(y)).

use num_bigint::BigUint;

use super::factor::smallest_irreducible;
use super::field::{add_digits, add_one_digits, from_digits, neg_digits, to_digits, Field};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::ntheory::{factor_u64, is_prime_u64};

/// Largest base field kept in log/exp tables.
pub const BASE_TABLE_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime_u64(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p as u64
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }

    fn pth_root(&self, a: u32) -> u32 {
        a
    }
}

#[derive(Debug, Clone)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// F_q with q = p^k. Codes are Σ d_j p^j for the coordinates d_j in F_p.
#[derive(Debug, Clone)]
pub struct BaseField {
    prime: PrimeField,
    k: u32,
    q: u64,
    /// Monic irreducible of degree k over F_p (x for k = 1).
    modulus: Poly,
    tables: Option<Tables>,
}

impl BaseField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        let prime = PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::domain("extension degree must be >= 1"));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::cap("base field size", (p as u128).saturating_pow(k), u32::MAX as u128))?;
        let modulus = smallest_irreducible(&prime, k as usize);
        let mut f = BaseField { prime, k, q, modulus, tables: None };
        if k > 1 && q <= BASE_TABLE_CAP {
            f.tables = Some(f.build_tables()?);
        }
        Ok(f)
    }

    pub fn prime(&self) -> u32 {
        self.prime.p
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Coordinates over F_p (k digits).
    pub fn digits(&self, a: u32) -> Vec<u32> {
        to_digits(a as u64, self.prime.p as u64, self.k as usize)
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        from_digits(d, self.prime.p as u64) as u32
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = Poly::new(self.digits(a));
        let pb = Poly::new(self.digits(b));
        let r = pa.mulmod(&self.prime, &pb, &self.modulus);
        self.from_digits(r.coeffs())
    }

    fn build_tables(&self) -> Result<Tables> {
        let order = self.q - 1;
        let fo = factor_u64(order)?;
        let primes: Vec<u64> = fo.primes()?.into_iter().map(|p| p.try_into().unwrap()).collect();
        let slow_pow = |a: u32, mut e: u64| {
            let mut acc = 1u32;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.slow_mul(acc, b);
                }
                b = self.slow_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let g = (2..self.q as u32)
            .find(|&c| primes.iter().all(|&r| slow_pow(c, order / r) != 1))
            .ok_or_else(|| Error::domain("no primitive element found"))?;
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, g);
        }
        for i in 0..n {
            exp[n + i] = exp[i];
        }
        Ok(Tables { exp, log })
    }
}

impl Field for BaseField {
    fn order(&self) -> u64 {
        self.q
    }

    fn characteristic(&self) -> u32 {
        self.prime.p
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            self.prime.add(a, b)
        } else {
            add_digits(self.prime.p, a, b)
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            self.prime.neg(a)
        } else {
            neg_digits(self.prime.p, a)
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return self.prime.mul(a, b);
        }
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
        if self.k == 1 {
            return self.prime.inv(a);
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as usize;
                t.exp[(self.q as usize - 1 - l) % (self.q as usize - 1)]
            }
            None => self.pow(a, self.q - 2),
        }
    }

    fn pth_root(&self, a: u32) -> u32 {
        if self.k == 1 {
            a
        } else {
            self.pow(a, self.q / self.prime.p as u64)
        }
    }
}

impl BaseField {
    /// a + 1
    pub fn add_one(&self, a: u32) -> u32 {
        add_one_digits(self.prime.p, a)
    }

    /// The order q as a big integer.
    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms<F: Field>(f: &F) {
        let q = f.order() as u32;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.pow(a, q as u64 - 1), 1);
            }
            let r = f.pth_root(a);
            assert_eq!(f.pow(r, f.characteristic() as u64), a);
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                let c = (a * 7 + b * 3 + 1) % q;
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn field_axioms() {
        check_axioms(&PrimeField::new(7).unwrap());
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3)] {
            check_axioms(&BaseField::new(p, k).unwrap());
        }
    }

    #[test]
    fn moduli_are_smallest() {
        // F_4: y^2 + y + 1; F_8: y^3 + y + 1; F_9: y^2 + 1
        assert_eq!(BaseField::new(2, 2).unwrap().modulus().coeffs(), &[1, 1, 1]);
        assert_eq!(BaseField::new(2, 3).unwrap().modulus().coeffs(), &[1, 1, 0, 1]);
        assert_eq!(BaseField::new(3, 2).unwrap().modulus().coeffs(), &[1, 0, 1]);
        assert_eq!(BaseField::new(2, 1).unwrap().modulus().coeffs(), &[0, 1]);
    }

    #[test]
    fn not_prime() {
        assert!(matches!(BaseField::new(4, 1), Err(Error::NotPrime(4))));
    }
}
