//! Freeness predicates: e-free, g-free, primitive, normal, Ord[β], and the
//! primitive-normal count 𝔑(q,n).

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffpoly::xn1::restrict_poly;
use crate::ffpoly::{factor_xn_minus_1, FactoredPoly, Field, Poly, SmallField, Tower, DEFAULT_TABLE_CAP};
use crate::ntheory::FactoredInteger;

/// Enumeration blocks for parallel counts.
pub(crate) const BLOCK: u32 = 1 << 12;

/// A tower with the factorizations of q^n − 1 and x^n − 1.
#[derive(Debug, Clone)]
pub struct FreenessContext {
    tower: Tower,
    field: SmallField,
    xn1: FactoredPoly,
    xn1_poly: Poly,
    /// (P, (x^n − 1)/P) for every distinct irreducible P.
    quotients: Vec<(Poly, Poly)>,
    order_primes: Vec<u64>,
}

impl FreenessContext {
    pub fn new(p: u32, k: u32, n: u32) -> Result<Self> {
        Self::with_cap(p, k, n, DEFAULT_TABLE_CAP)
    }

    /// Fails when q^n exceeds `cap`.
    pub fn with_cap(p: u32, k: u32, n: u32, cap: u64) -> Result<Self> {
        let size = (p as u128).checked_pow(k * n).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::cap("field size for enumeration", size, cap as u128));
        }
        let tower = Tower::build(p, k, n)?;
        let field = SmallField::new(&tower, cap)?;
        let base = tower.base();
        let xn1 = factor_xn_minus_1(base, n as u64)?;
        let xn1_poly = Poly::xn_minus_one(base, n as usize);
        let quotients = xn1.factors.iter().map(|(pp, _)| (pp.clone(), xn1_poly.div_exact(base, pp))).collect();
        let order_primes = tower.factored_order().primes()?.iter().map(|r| r.to_u64().unwrap()).collect();
        Ok(FreenessContext { tower, field, xn1, xn1_poly, quotients, order_primes })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn field(&self) -> &SmallField {
        &self.field
    }

    pub fn base(&self) -> &crate::ffpoly::BaseField {
        self.tower.base()
    }

    pub fn xn1(&self) -> &FactoredPoly {
        &self.xn1
    }

    pub fn xn1_poly(&self) -> &Poly {
        &self.xn1_poly
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn n(&self) -> u32 {
        self.tower.n()
    }

    /// Q = q^n.
    pub fn size(&self) -> u64 {
        self.field.size()
    }

    pub fn factored_order(&self) -> &FactoredInteger {
        self.tower.factored_order()
    }

    pub fn order_primes(&self) -> &[u64] {
        &self.order_primes
    }

    /// Factorization of a divisor e of q^n − 1.
    pub fn order_divisor(&self, e: u64) -> Result<FactoredInteger> {
        self.factored_order().restrict(&BigUint::from(e))
    }

    /// Factorization of a monic divisor g of x^n − 1.
    pub fn xn1_divisor(&self, g: &Poly) -> Result<FactoredPoly> {
        restrict_poly(self.base(), &self.xn1, g)
    }

    /// α^{(Q−1)/d} ≠ 1 for every prime d | e.
    pub fn is_e_free(&self, alpha: u32, e: &FactoredInteger) -> Result<bool> {
        if alpha == 0 {
            return Err(Error::domain("0 is never e-free"));
        }
        let m = self.size() - 1;
        let primes = e.primes()?;
        let l = self.field.log(alpha);
        for d in primes {
            let d = d.to_u64().unwrap();
            if !m.is_multiple_of(d) {
                return Err(Error::invalid(format!("{} does not divide q^n - 1", e.value())));
            }
            // α^{m/d} = 1 ⟺ d | log α
            if l.is_multiple_of(d) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_primitive(&self, alpha: u32) -> bool {
        alpha != 0 && {
            let l = self.field.log(alpha);
            self.order_primes.iter().all(|d| !l.is_multiple_of(*d))
        }
    }

    /// The monic generator of the annihilator of β, a divisor of x^n − 1.
    pub fn additive_order(&self, beta: u32) -> Poly {
        let base = self.base();
        let mut g = self.xn1_poly.clone();
        for (p, e) in &self.xn1.factors {
            for _ in 0..*e {
                let h = g.div_exact(base, p);
                if self.field.poly_action(&h, beta) == 0 {
                    g = h;
                } else {
                    break;
                }
            }
        }
        g
    }

    /// For every irreducible P | g: ((x^n − 1)/P) ∘ β ≠ 0.
    pub fn is_g_free(&self, beta: u32, g: &Poly) -> Result<bool> {
        let fg = self.xn1_divisor(g)?;
        Ok(self.is_g_free_factored(beta, &fg))
    }

    pub fn is_g_free_factored(&self, beta: u32, g: &FactoredPoly) -> bool {
        g.factors.iter().all(|(p, _)| {
            let quo = &self.quotients.iter().find(|(pp, _)| pp == p).expect("divisor of x^n - 1").1;
            self.field.poly_action(quo, beta) != 0
        })
    }

    pub fn is_normal(&self, beta: u32) -> bool {
        if beta == 0 {
            return false;
        }
        let conj = self.conjugates(beta);
        self.quotients.iter().all(|(_, quo)| self.action_from_conjugates(quo, &conj) != 0)
    }

    /// β, β^q, …, β^{q^{n−1}}.
    pub fn conjugates(&self, beta: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n() as usize);
        let mut x = beta;
        for _ in 0..self.n() {
            out.push(x);
            x = self.field.frobenius_q(x, 1);
        }
        out
    }

    fn action_from_conjugates(&self, f: &Poly, conj: &[u32]) -> u32 {
        f.coeffs().iter().zip(conj).fold(0, |acc, (&c, &b)| self.field.add(acc, self.field.mul(c, b)))
    }

    /// Normality via the rank of the conjugates over F_q (independent oracle).
    pub fn is_normal_by_rank(&self, beta: u32) -> bool {
        let n = self.n() as usize;
        let base = self.base();
        let mut rows: Vec<Vec<u32>> = self.conjugates(beta).iter().map(|&c| self.field.to_element(c).coords).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(rank, piv);
            let inv = base.inv(rows[rank][col]);
            let pivot_row: Vec<u32> = rows[rank].iter().map(|&x| base.mul(x, inv)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let c = row[col];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = base.sub(*x, base.mul(c, y));
                    }
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        rank == n
    }

    /// Definitional g-free test: β ≠ P ∘ λ for every λ and every irreducible P | g.
    pub fn is_g_free_by_search(&self, beta: u32, g: &Poly) -> Result<bool> {
        let fg = self.xn1_divisor(g)?;
        for (p, _) in &fg.factors {
            if self.field.elements().any(|l| self.field.poly_action(p, l) == beta) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// 𝔑(q,n) by full enumeration.
    pub fn count_primitive_normal(&self) -> u64 {
        self.parallel_count(|a| self.is_primitive(a) && self.is_normal(a))
    }

    pub fn count_normal(&self) -> u64 {
        self.parallel_count(|a| self.is_normal(a))
    }

    pub fn count_primitive(&self) -> u64 {
        self.parallel_count(|a| self.is_primitive(a))
    }

    fn parallel_count(&self, pred: impl Fn(u32) -> bool + Sync) -> u64 {
        let size = self.size() as u32;
        let blocks = size.div_ceil(BLOCK);
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let lo = b * BLOCK;
                let hi = (lo + BLOCK).min(size);
                (lo..hi).filter(|&a| pred(a)).count() as u64
            })
            .collect::<Vec<u64>>()
            .into_iter()
            .sum()
    }

    /// Primitive normal elements, in code order.
    pub fn primitive_normal_elements(&self) -> Vec<u32> {
        let size = self.size() as u32;
        let blocks = size.div_ceil(BLOCK);
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let lo = b * BLOCK;
                let hi = (lo + BLOCK).min(size);
                (lo..hi).filter(|&a| self.is_primitive(a) && self.is_normal(a)).collect::<Vec<u32>>()
            })
            .collect::<Vec<_>>()
            .concat()
    }
}

/// 𝔑(q,n) for q = p^k.
pub fn count_primitive_normal(p: u32, k: u32, n: u32) -> Result<u64> {
    Ok(FreenessContext::new(p, k, n)?.count_primitive_normal())
}
