//! x^n − 1 over F_q: its factor shape from cyclotomic cosets, its concrete
//! factorization, and the derived counts W_q, Φ_q and s.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::base::BaseField;
use super::factor::{factor, FactoredPoly};
use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::ntheory::{factor_u64, prime_power};

/// Irreducible factors of x^n − 1 attached to one cyclotomic index d | n'.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeBlock {
    /// The index d of Φ_d.
    pub d: u64,
    /// Degree ord_d(q) of each factor.
    pub degree: u64,
    /// Number of factors, φ(d)/ord_d(q).
    pub count: u64,
    /// Multiplicity p^e of each.
    pub multiplicity: u64,
}

/// Degrees and multiplicities of the factors of x^n − 1, computed without
/// field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XnShape {
    pub q: u64,
    pub n: u64,
    pub blocks: Vec<ShapeBlock>,
}

/// Multiplicative order of q modulo d (d ≥ 1, gcd(q, d) = 1).
pub fn mult_order(q: u64, d: u64) -> u64 {
    if d == 1 {
        return 1;
    }
    let qm = (q % d) as u128;
    let mut x = qm;
    let mut k = 1;
    while x != 1 {
        x = x * qm % d as u128;
        k += 1;
    }
    k
}

fn euler_phi_u64(d: u64) -> u64 {
    factor_u64(d).and_then(|f| f.euler_phi()).map(|v| v.try_into().unwrap()).unwrap_or(0)
}

pub fn xn_shape(q: u64, n: u64) -> Result<XnShape> {
    let (p, _) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mut np = n;
    let mut pe = 1;
    while np.is_multiple_of(p) {
        np /= p;
        pe *= p;
    }
    let mut blocks = Vec::new();
    for d in 1..=np {
        if !np.is_multiple_of(d) {
            continue;
        }
        let degree = mult_order(q, d);
        blocks.push(ShapeBlock { d, degree, count: euler_phi_u64(d) / degree, multiplicity: pe });
    }
    Ok(XnShape { q, n, blocks })
}

impl XnShape {
    /// Number of distinct monic irreducible factors.
    pub fn s(&self) -> u64 {
        self.blocks.iter().map(|b| b.count).sum()
    }

    /// W_q(x^n − 1) = 2^s.
    pub fn wq(&self) -> BigUint {
        BigUint::one() << self.s()
    }

    /// Φ_q(x^n − 1) = ∏ (q^deg − 1)·q^{(mult−1)·deg}.
    pub fn phi_q(&self) -> BigUint {
        let q = BigUint::from(self.q);
        let mut acc = BigUint::one();
        for b in &self.blocks {
            let one = (q.pow(b.degree as u32) - 1u32) * q.pow(((b.multiplicity - 1) * b.degree) as u32);
            acc *= one.pow(b.count as u32);
        }
        acc
    }

    /// Number of distinct linear factors, gcd(n', q − 1).
    pub fn linear_count(&self) -> u64 {
        self.blocks.iter().filter(|b| b.degree == 1).map(|b| b.count).sum()
    }

    /// (degree, multiplicity) of every distinct factor, sorted by degree.
    pub fn factor_degrees(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n((b.degree, b.multiplicity), b.count as usize))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Concrete factorization of x^n − 1 over F_q, using x^n − 1 = (x^{n'} − 1)^{p^e}.
pub fn factor_xn_minus_1(base: &BaseField, n: u64) -> Result<FactoredPoly> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let p = base.characteristic() as u64;
    let mut np = n;
    let mut pe = 1u32;
    while np.is_multiple_of(p) {
        np /= p;
        pe *= p as u32;
    }
    let mut fp = factor(base, &Poly::xn_minus_one(base, np as usize))?;
    for (_, e) in fp.factors.iter_mut() {
        *e *= pe;
    }
    Ok(fp)
}

/// Φ_q(g) = |(F_q[x]/g)^*| for a factored g.
pub fn phi_q(q: u64, g: &FactoredPoly) -> BigUint {
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for (p, e) in &g.factors {
        let d = p.deg() as u32;
        acc *= (q.pow(d) - 1u32) * q.pow((e - 1) * d);
    }
    acc
}

/// Polynomial Möbius function: 0 unless square-free, else (−1)^{#factors}.
pub fn moebius_poly(g: &FactoredPoly) -> i32 {
    if g.factors.iter().any(|(_, e)| *e > 1) {
        0
    } else if g.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All monic divisors of the factored polynomial, as factored exponent choices.
pub fn monic_divisors(g: &FactoredPoly, cap: usize) -> Result<Vec<FactoredPoly>> {
    let count: u128 = g.factors.iter().map(|(_, e)| *e as u128 + 1).product();
    if count > cap as u128 {
        return Err(Error::cap("monic divisors", count, cap as u128));
    }
    let mut out = vec![FactoredPoly { unit: 1, factors: Vec::new() }];
    for (p, e) in &g.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            for k in 0..=*e {
                let mut f = d.clone();
                if k > 0 {
                    f.factors.push((p.clone(), k));
                }
                next.push(f);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Monic square-free divisors.
pub fn squarefree_divisors(g: &FactoredPoly) -> Vec<FactoredPoly> {
    let rad = FactoredPoly { unit: 1, factors: g.factors.iter().map(|(p, _)| (p.clone(), 1)).collect() };
    monic_divisors(&rad, usize::MAX).expect("no cap")
}

/// Factor a monic divisor `h` of a factored `g` using g's irreducibles.
pub fn restrict_poly<F: Field>(f: &F, g: &FactoredPoly, h: &Poly) -> Result<FactoredPoly> {
    if h.is_zero() {
        return Err(Error::invalid("zero polynomial is not a divisor"));
    }
    let mut rest = h.monic(f);
    let mut factors = Vec::new();
    for (p, _) in &g.factors {
        let mut e = 0;
        loop {
            let (qt, r) = rest.divrem(f, p);
            if !r.is_zero() {
                break;
            }
            rest = qt;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
    }
    if rest.deg() > 0 {
        return Err(Error::invalid(format!("{h} does not divide the reference polynomial")));
    }
    let fp = FactoredPoly { unit: h.lead(), factors };
    for (p, e) in &fp.factors {
        if *e > g.multiplicity(p) {
            return Err(Error::invalid(format!("{h} does not divide the reference polynomial")));
        }
    }
    Ok(fp)
}
