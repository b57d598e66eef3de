//! The tower F_p ⊂ F_q ⊂ F_{q^n} with exact coordinate arithmetic at any size.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::base::BaseField;
use super::factor::smallest_irreducible;
use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::ntheory::{cyclotomic_split, FactoredInteger, DEFAULT_BUDGET};

/// Element of F_{q^n}: n coordinates, each an F_q code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    pub coords: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct Tower {
    base: BaseField,
    n: u32,
    top_modulus: Poly,
    order: BigUint,
    factored_order: FactoredInteger,
    generator: FieldElement,
}

impl Tower {
    /// Deterministic tower: smallest moduli, first primitive element in code order.
    pub fn build(p: u32, k: u32, n: u32) -> Result<Tower> {
        if n == 0 {
            return Err(Error::domain("extension degree n must be >= 1"));
        }
        let base = BaseField::new(p, k)?;
        let top_modulus = smallest_irreducible(&base, n as usize);
        let order = BigUint::from(base.q()).pow(n);
        let factored_order = if order == BigUint::from(2u32) {
            FactoredInteger::one()
        } else {
            cyclotomic_split(base.q(), n, DEFAULT_BUDGET)?
        };
        if !factored_order.is_complete() {
            return Err(Error::Incomplete { cofactor: factored_order.cofactor().cloned().unwrap_or_default() });
        }
        let mut t =
            Tower { base, n, top_modulus, order, factored_order, generator: FieldElement { coords: Vec::new() } };
        t.generator = t.find_generator()?;
        Ok(t)
    }

    fn find_generator(&self) -> Result<FieldElement> {
        let primes = self.factored_order.primes()?;
        let qm1 = &self.order - 1u32;
        let exps: Vec<BigUint> = primes.iter().map(|r| &qm1 / r).collect();
        let mut code = BigUint::one();
        loop {
            let e = self.from_code(&code)?;
            if exps.iter().all(|x| !self.is_one(&self.pow(&e, x))) {
                return Ok(e);
            }
            code += 1u32;
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.prime()
    }

    pub fn k(&self) -> u32 {
        self.base.k()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// Q = q^n.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn factored_order(&self) -> &FactoredInteger {
        &self.factored_order
    }

    pub fn base_modulus(&self) -> &Poly {
        self.base.modulus()
    }

    pub fn top_modulus(&self) -> &Poly {
        &self.top_modulus
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    fn to_poly(&self, a: &FieldElement) -> Poly {
        Poly::new(a.coords.clone())
    }

    fn encode_poly(&self, p: Poly) -> FieldElement {
        let mut c = p.into_coeffs();
        c.resize(self.n as usize, 0);
        FieldElement { coords: c }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![0; self.n as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Embeds an F_q code.
    pub fn from_base(&self, c: u32) -> FieldElement {
        let mut v = vec![0; self.n as usize];
        v[0] = c;
        FieldElement { coords: v }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        a.coords[0] == 1 && a.coords[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.base.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.base.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|&x| self.base.neg(x)).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.encode_poly(self.to_poly(a).mulmod(&self.base, &self.to_poly(b), &self.top_modulus))
    }

    pub fn scale(&self, c: u32, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|&x| self.base.mul(c, x)).collect() }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        let (_, s, _) = self.to_poly(a).ext_gcd(&self.base, &self.top_modulus);
        Ok(self.encode_poly(s.rem(&self.base, &self.top_modulus)))
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        self.encode_poly(self.to_poly(a).powmod(&self.base, e, &self.top_modulus))
    }

    /// β^{q^i}, i reduced mod n.
    pub fn frobenius_q(&self, b: &FieldElement, i: u64) -> FieldElement {
        let i = i % self.n as u64;
        let q = BigUint::from(self.q());
        let mut x = b.clone();
        for _ in 0..i {
            x = self.pow(&x, &q);
        }
        x
    }

    /// f ∘ β = Σ f_i β^{q^i} for f over F_q.
    pub fn poly_action(&self, f: &Poly, b: &FieldElement) -> FieldElement {
        let q = BigUint::from(self.q());
        let mut acc = self.zero();
        let mut conj = b.clone();
        for (i, &c) in f.coeffs().iter().enumerate() {
            if i > 0 {
                conj = self.pow(&conj, &q);
            }
            if c != 0 {
                acc = self.add(&acc, &self.scale(c, &conj));
            }
        }
        acc
    }

    /// Code Σ c_i q^i.
    pub fn code(&self, a: &FieldElement) -> BigUint {
        let q = BigUint::from(self.q());
        a.coords.iter().rev().fold(BigUint::zero(), |acc, &c| acc * &q + BigUint::from(c))
    }

    pub fn from_code(&self, code: &BigUint) -> Result<FieldElement> {
        if code >= &self.order {
            return Err(Error::invalid(format!("element code {code} out of range for a field of size {}", self.order)));
        }
        let q = BigUint::from(self.q());
        let mut c = code.clone();
        let mut coords = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            coords.push((&c % &q).to_u32().unwrap());
            c /= &q;
        }
        Ok(FieldElement { coords })
    }

    /// α^{(Q−1)/d} ≠ 1 for every prime d of the factored order.
    pub fn is_primitive(&self, a: &FieldElement) -> Result<bool> {
        if self.is_zero(a) {
            return Ok(false);
        }
        let qm1 = &self.order - 1u32;
        for r in self.factored_order.primes()? {
            if self.is_one(&self.pow(a, &(&qm1 / &r))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Q as u64 when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }
}
