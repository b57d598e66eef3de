//! Explicit multiplicative and additive characters of F_{q^n}.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::xn1::monic_divisors;
use crate::ffpoly::{FactoredPoly, Field, Poly};
use crate::freeness::FreenessContext;

/// Cap on the number of monic divisors of x^n − 1 tracked for additive orders.
const DIVISOR_CAP: usize = 1 << 14;

#[inline]
pub(crate) fn cis_fraction(num: u64, den: u64) -> Complex64 {
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let t = TAU * num as f64 / den as f64;
    Complex64::new(t.cos(), t.sin())
}

/// χ(g^m) = exp(2πi·j·m/d) for the fixed generator g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultCharacter {
    pub d: u64,
    pub j: u64,
}

impl MultCharacter {
    pub fn trivial() -> Self {
        MultCharacter { d: 1, j: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.j.is_multiple_of(self.d)
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> u64 {
        self.d / self.j.gcd(&self.d)
    }

    /// Value at a nonzero element given its discrete log.
    #[inline]
    pub fn at_log(&self, m: u64) -> Complex64 {
        let e = (self.j as u128 * (m % self.d) as u128 % self.d as u128) as u64;
        cis_fraction(e, self.d)
    }
}

/// ψ_c(β) = exp(2πi·Tr(cβ)/p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddCharacter {
    pub c: u32,
}

impl AddCharacter {
    pub fn is_trivial(&self) -> bool {
        self.c == 0
    }
}

/// Trace table, discrete logs and F_q-orders of every additive character.
#[derive(Debug, Clone)]
pub struct CharContext<'a> {
    ctx: &'a FreenessContext,
    trace: Vec<u32>,
    /// Monic divisors of x^n − 1 in exponent-vector order.
    divisors: Vec<FactoredPoly>,
    /// F_q-order of ψ_c as an index into `divisors`.
    add_order: Vec<usize>,
    by_order: Vec<Vec<u32>>,
}

impl<'a> CharContext<'a> {
    pub fn new(ctx: &'a FreenessContext) -> Result<Self> {
        let field = ctx.field();
        let trace: Vec<u32> = field.elements().map(|a| field.abs_trace(a)).collect();
        let divisors = monic_divisors(ctx.xn1(), DIVISOR_CAP)?;
        let exps: Vec<u32> = ctx.xn1().factors.iter().map(|(_, e)| *e).collect();
        // mixed-radix index of an exponent vector, matching monic_divisors' order
        let index_of = |ev: &[u32]| -> usize {
            ev.iter().zip(&exps).fold(0usize, |acc, (&e, &m)| acc * (m as usize + 1) + e as usize)
        };
        let base = ctx.base();
        let polys: Vec<Poly> = divisors.iter().map(|d| crate::ffpoly::factor::expand(base, &d.factors)).collect();
        // h ∘ b_j over the F_p-basis b_j = p^j
        let p = field.characteristic();
        let digits = base.k() * ctx.n();
        let basis: Vec<u32> = (0..digits).map(|j| p.pow(j)).collect();
        let images: Vec<Vec<u32>> =
            polys.iter().map(|h| basis.iter().map(|&b| field.poly_action(h, b)).collect()).collect();
        let mut add_order = Vec::with_capacity(field.size() as usize);
        for c in field.elements() {
            let trivial_on = |idx: usize| images[idx].iter().all(|&y| trace[field.mul(c, y) as usize] == 0);
            let mut ev = exps.clone();
            for i in 0..ev.len() {
                while ev[i] > 0 {
                    ev[i] -= 1;
                    if !trivial_on(index_of(&ev)) {
                        ev[i] += 1;
                        break;
                    }
                }
            }
            add_order.push(index_of(&ev));
        }
        let mut by_order = vec![Vec::new(); divisors.len()];
        for (c, &o) in add_order.iter().enumerate() {
            by_order[o].push(c as u32);
        }
        Ok(CharContext { ctx, trace, divisors, add_order, by_order })
    }

    pub fn freeness(&self) -> &FreenessContext {
        self.ctx
    }

    /// Absolute trace of `a` to F_p.
    #[inline]
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize]
    }

    #[inline]
    pub fn mult_value(&self, chi: &MultCharacter, a: u32) -> Complex64 {
        debug_assert!(a != 0);
        chi.at_log(self.ctx.field().log(a))
    }

    #[inline]
    pub fn add_value(&self, psi: &AddCharacter, b: u32) -> Complex64 {
        let p = self.ctx.field().characteristic() as u64;
        cis_fraction(self.trace(self.ctx.field().mul(psi.c, b)) as u64, p)
    }

    /// F_q-order of ψ_c as a factored monic divisor of x^n − 1.
    pub fn fq_order(&self, psi: &AddCharacter) -> &FactoredPoly {
        &self.divisors[self.add_order[psi.c as usize]]
    }

    /// Direct check that ψ∘h is trivial, over every β.
    pub fn composed_trivial(&self, psi: &AddCharacter, h: &Poly) -> bool {
        let field = self.ctx.field();
        field.elements().all(|b| self.trace(field.mul(psi.c, field.poly_action(h, b))) == 0)
    }

    /// The φ(d) characters of exact order d, d | q^n − 1.
    pub fn mult_characters_of_order(&self, d: u64) -> Result<Vec<MultCharacter>> {
        let m = self.ctx.size() - 1;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(Error::invalid(format!("{d} does not divide q^n - 1 = {m}")));
        }
        if d == 1 {
            return Ok(vec![MultCharacter::trivial()]);
        }
        Ok((1..d).filter(|j| j.gcd(&d) == 1).map(|j| MultCharacter { d, j }).collect())
    }

    /// The Φ(h) additive characters of F_q-order h, h | x^n − 1.
    pub fn add_characters_of_order(&self, h: &Poly) -> Result<Vec<AddCharacter>> {
        let fh = self.ctx.xn1_divisor(h)?;
        let idx = self.divisor_index(&fh)?;
        Ok(self.by_order[idx].iter().map(|&c| AddCharacter { c }).collect())
    }

    fn divisor_index(&self, fh: &FactoredPoly) -> Result<usize> {
        self.divisors
            .iter()
            .position(|d| d.factors == fh.factors)
            .ok_or_else(|| Error::invalid("not a monic divisor of x^n - 1"))
    }

    pub(crate) fn chars_for_divisor(&self, fh: &FactoredPoly) -> Result<&[u32]> {
        Ok(&self.by_order[self.divisor_index(fh)?])
    }
}
