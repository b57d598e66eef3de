//! Irreducibility testing and factorization over finite fields.
//!
//! Square-free decomposition, distinct-degree factorization, then
//! Cantor-Zassenhaus splitting driven by a fixed-seed generator.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::poly::{product, Poly};
use crate::error::{Error, Result};
use crate::ntheory::factor_u64;

const EDF_SEED: u64 = 0x00c0_ffee;

/// unit · ∏ P_i^{e_i} with monic irreducible P_i sorted increasingly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredPoly {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl FactoredPoly {
    pub fn reassemble<F: Field>(&self, f: &F) -> Poly {
        let mut acc = Poly::constant(self.unit);
        for (p, e) in &self.factors {
            acc = acc.mul(f, &p.pow(f, *e as u64));
        }
        acc
    }

    /// Number of distinct irreducible factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    /// Multiplicity of `p` (0 when absent).
    pub fn multiplicity(&self, p: &Poly) -> u32 {
        self.factors.iter().find(|(f, _)| f == p).map(|(_, e)| *e).unwrap_or(0)
    }
}

fn primes_of(d: usize) -> Vec<usize> {
    factor_u64(d as u64)
        .and_then(|f| f.primes())
        .map(|v| v.into_iter().map(|p| usize::try_from(p).unwrap()).collect())
        .unwrap_or_default()
}

/// x^{q^i} mod m for i = 0..=count.
fn frobenius_powers<F: Field>(f: &F, m: &Poly, count: usize) -> Vec<Poly> {
    let q = BigUint::from(f.order());
    let mut out = Vec::with_capacity(count + 1);
    let mut h = Poly::x().rem(f, m);
    out.push(h.clone());
    for _ in 0..count {
        h = h.powmod(f, &q, m);
        out.push(h.clone());
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: Field>(f: &F, g: &Poly) -> bool {
    let d = match g.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let m = g.monic(f);
    let pw = frobenius_powers(f, &m, d);
    let x = Poly::x();
    if pw[d] != x.rem(f, &m) {
        return false;
    }
    primes_of(d).into_iter().all(|r| pw[d / r].sub(f, &x).gcd(f, &m).is_one())
}

/// Lexicographically smallest monic irreducible of degree `d`.
pub fn smallest_irreducible<F: Field>(f: &F, d: usize) -> Poly {
    let q = f.order();
    (0u64..)
        .map(|i| Poly::monic_from_index(q, d, i))
        .find(|p| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Square-free decomposition of a monic polynomial: pairs (g, i) with g
/// square-free and the product of g^i equal to the input.
pub fn squarefree_decomposition<F: Field>(f: &F, g: &Poly) -> Vec<(Poly, u32)> {
    let p = f.characteristic();
    let mut out = Vec::new();
    if g.deg() == 0 {
        return out;
    }
    let d = g.derivative(f);
    let mut c = g.gcd(f, &d);
    let mut w = g.div_exact(f, &c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(f, &c);
        let fac = w.div_exact(f, &y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(f, &w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root(f);
        for (h, m) in squarefree_decomposition(f, &root) {
            out.push((h, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree<F: Field>(f: &F, g: &Poly) -> Vec<(Poly, usize)> {
    let q = BigUint::from(f.order());
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = Poly::x().rem(f, &rest);
    let mut i = 1;
    while rest.deg() >= 2 * i {
        h = h.powmod(f, &q, &rest);
        let gi = rest.gcd(f, &h.sub(f, &Poly::x()));
        if !gi.is_one() {
            rest = rest.div_exact(f, &gi);
            h = h.rem(f, &rest);
            out.push((gi, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Splits a monic square-free product of irreducibles of degree `d`.
pub fn equal_degree<F: Field>(f: &F, g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = g.deg();
    let r = n / d;
    let mut parts = vec![g.clone()];
    if r <= 1 {
        return parts;
    }
    let q = f.order();
    let p = f.characteristic();
    let odd_exp = (BigUint::from(q).pow(d as u32) - 1u32) >> 1u32;
    let trace_terms = f.prime_degree() as usize * d;
    while parts.len() < r {
        let a = Poly::new((0..n).map(|_| rng.gen_range(0..q) as u32).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..trace_terms {
                t = t.mulmod(f, &t, g);
                acc = acc.add(f, &t);
            }
            acc
        } else {
            a.powmod(f, &odd_exp, g).sub(f, &Poly::one())
        };
        let mut next = Vec::with_capacity(parts.len() + 1);
        for u in parts {
            if u.deg() == d {
                next.push(u);
                continue;
            }
            let h = u.gcd(f, &b);
            if h.deg() > 0 && h.deg() < u.deg() {
                next.push(u.div_exact(f, &h));
                next.push(h);
            } else {
                next.push(u);
            }
        }
        parts = next;
    }
    parts
}

/// Complete factorization into monic irreducibles.
pub fn factor<F: Field>(f: &F, g: &Poly) -> Result<FactoredPoly> {
    if g.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    let unit = g.lead();
    let m = g.monic(f);
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (sf, mult) in squarefree_decomposition(f, &m) {
        for (block, d) in distinct_degree(f, &sf) {
            for irr in equal_degree(f, &block, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort();
    // distinct multiplicities give coprime blocks, but merge defensively
    let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(FactoredPoly { unit, factors: merged })
}

/// Distinct roots of `g` in the field, increasing.
pub fn roots<F: Field>(f: &F, g: &Poly) -> Result<Vec<u32>> {
    let fp = factor(f, g)?;
    let mut out: Vec<u32> = fp.factors.iter().filter(|(p, _)| p.deg() == 1).map(|(p, _)| f.neg(p.coeff(0))).collect();
    out.sort_unstable();
    Ok(out)
}

/// Product of the listed irreducibles with multiplicities.
pub fn expand<F: Field>(f: &F, factors: &[(Poly, u32)]) -> Poly {
    let powers: Vec<Poly> = factors.iter().map(|(p, e)| p.pow(f, *e as u64)).collect();
    product(f, powers.iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::base::{BaseField, PrimeField};

    fn p(v: &[u32]) -> Poly {
        Poly::new(v.to_vec())
    }

    #[test]
    fn xn_minus_one_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let fac = factor(&f2, &Poly::xn_minus_one(&f2, 3)).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 1), (p(&[1, 1, 1]), 1)]);
        let fac = factor(&f2, &Poly::xn_minus_one(&f2, 4)).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 4)]);
        let f3 = PrimeField::new(3).unwrap();
        let fac = factor(&f3, &Poly::xn_minus_one(&f3, 4)).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 1), (p(&[2, 1]), 1), (p(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn smallest_irreducibles() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(smallest_irreducible(&f2, 3), p(&[1, 1, 0, 1]));
        assert_eq!(smallest_irreducible(&f2, 1), p(&[0, 1]));
        let f3 = PrimeField::new(3).unwrap();
        // x^4 + x + 2 over F_3
        assert_eq!(smallest_irreducible(&f3, 4), p(&[2, 1, 0, 0, 1]));
    }

    #[test]
    fn reassembles_over_extension() {
        let f4 = BaseField::new(2, 2).unwrap();
        let g = p(&[3, 0, 2, 1, 0, 1, 1, 2, 3]);
        let fac = factor(&f4, &g).unwrap();
        assert_eq!(fac.reassemble(&f4), g);
        for (h, _) in &fac.factors {
            assert!(is_irreducible(&f4, h));
        }
        let f9 = BaseField::new(3, 2).unwrap();
        let g = Poly::xn_minus_one(&f9, 16);
        let fac = factor(&f9, &g).unwrap();
        assert_eq!(fac.reassemble(&f9), g);
        // ord_16(9) = 2 ... degrees: 8 linear (x^8 - 1 splits in F_9), 4 quadratic
        assert_eq!(fac.factors.iter().filter(|(h, _)| h.deg() == 1).count(), 8);
        assert_eq!(fac.factors.iter().filter(|(h, _)| h.deg() == 2).count(), 4);
    }

    #[test]
    fn roots_of_split_poly() {
        let f5 = PrimeField::new(5).unwrap();
        let g = p(&[1, 0, 0, 0, 4]); // 4x^4 + 1 = -(x^4 - 1)
        assert_eq!(roots(&f5, &g).unwrap(), vec![1, 2, 3, 4]);
    }
}
