//! Brute-force oracles: direct N_f counts, counterexample verification and
//! exhaustive ℬ(m1, m2) membership on tiny fields.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::factor::roots;
use crate::ffpoly::field::to_digits;
use crate::ffpoly::poly::interpolate;
use crate::ffpoly::{FactoredPoly, Field, Poly};
use crate::freeness::{FreenessContext, BLOCK};
use crate::ntheory::FactoredInteger;
use crate::upsilon::{in_upsilon, CoefficientDomain, RationalFn};

/// Default number of witnesses retained by a count.
pub const DEFAULT_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub n_f: u64,
    pub witnesses: Vec<u32>,
    pub f: String,
    pub e1: String,
    pub e2: String,
    pub g: String,
}

fn primes_u64(e: &FactoredInteger) -> Result<Vec<u64>> {
    Ok(e.primes()?.iter().map(|p| p.to_u64().unwrap()).collect())
}

/// Number of α that are e1-free, g-free, with f(α) defined and e2-free.
pub fn count_nf_direct(
    ctx: &FreenessContext,
    f: &RationalFn,
    e1: &FactoredInteger,
    e2: &FactoredInteger,
    g: &FactoredPoly,
    max_witnesses: usize,
) -> Result<CountResult> {
    let m = ctx.size() - 1;
    let p1 = primes_u64(e1)?;
    let p2 = primes_u64(e2)?;
    if p1.iter().chain(&p2).any(|d| !m.is_multiple_of(*d)) {
        return Err(Error::invalid("e1 and e2 must divide q^n - 1"));
    }
    let field = ctx.field();
    let free = |a: u32, primes: &[u64]| {
        let l = field.log(a);
        primes.iter().all(|d| !l.is_multiple_of(*d))
    };
    let size = ctx.size() as u32;
    let blocks: Vec<(u64, Vec<u32>)> = (0..size.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(size);
            let mut count = 0u64;
            let mut wit = Vec::new();
            for a in lo..hi {
                if f.is_exceptional(field, a) || !free(a, &p1) {
                    continue;
                }
                let Some(v) = f.evaluate(field, a) else { continue };
                if v == 0 || !free(v, &p2) || !ctx.is_g_free_factored(a, g) {
                    continue;
                }
                count += 1;
                if wit.len() < max_witnesses {
                    wit.push(a);
                }
            }
            (count, wit)
        })
        .collect();
    let mut n_f = 0;
    let mut witnesses = Vec::new();
    for (c, w) in blocks {
        n_f += c;
        for a in w {
            if witnesses.len() < max_witnesses {
                witnesses.push(a);
            }
        }
    }
    Ok(CountResult {
        n_f,
        witnesses,
        f: f.to_text(),
        e1: e1.value().to_string(),
        e2: e2.value().to_string(),
        g: format!("{}", crate::ffpoly::factor::expand(ctx.base(), &g.factors)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub confirmed: bool,
    /// Primitive normal α with f(α) primitive.
    pub surviving_alphas: Vec<u32>,
}

/// Confirms that no primitive normal α has f(α) primitive.
pub fn verify_counterexample(ctx: &FreenessContext, f: &RationalFn) -> CounterexampleReport {
    let field = ctx.field();
    let surviving_alphas: Vec<u32> = ctx
        .primitive_normal_elements()
        .into_iter()
        .filter(|&a| matches!(f.evaluate(field, a), Some(v) if ctx.is_primitive(v)))
        .collect();
    CounterexampleReport { confirmed: surviving_alphas.is_empty(), surviving_alphas }
}

/// Explicit failing functions for (2,6), (3,3) and (3,4) under caps (3, 2).
///
/// For (3,4) the coefficients use a root a of x⁴ − x³ − 1; any root works
/// since Frobenius permutes both the roots and the primitive normal elements.
pub fn known_counterexample(ctx: &FreenessContext) -> Result<Option<RationalFn>> {
    let field = ctx.field();
    let f = match (ctx.q(), ctx.n()) {
        (2, 6) => RationalFn::new(field, Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2)?,
        (3, 3) => RationalFn::new(field, Poly::new(vec![2, 1, 1]), Poly::one(), 3, 2)?,
        (3, 4) => {
            // x⁴ − x³ − 1 = x⁴ + 2x³ + 2 over F_3
            let a = *roots(field, &Poly::new(vec![2, 0, 0, 2, 1]))?
                .first()
                .ok_or_else(|| Error::invalid("no root of x^4 - x^3 - 1"))?;
            let a2 = field.mul(a, a);
            let a3 = field.mul(a2, a);
            let two = |v: u32| field.add(v, v);
            let c0 = field.add(field.add(two(a3), two(a2)), 1);
            RationalFn::new(field, Poly::new(vec![c0, a]), Poly::new(vec![two(a), 1]), 3, 2)?
        }
        _ => return Ok(None),
    };
    Ok(Some(f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExhaustiveOutcome {
    /// Every f in Υ has a primitive normal α with f(α) primitive.
    InB { functions_checked: u64 },
    /// An f in Υ for which no α works.
    NotInB { failing: RationalFn },
    /// Estimated work above the cap.
    Unresolved { estimated_work: u128, cap: u128 },
}

/// Default cap on the estimated number of interpolations.
pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 200_000_000;

/// Exhaustive ℬ(m1, m2) check.
///
/// For each monic f2, a failing f1 must map m1+1 chosen primitive normal
/// points (not roots of f2) into f2(α)·({0} ∪ non-primitive). f1 is
/// interpolated from those values and checked at the remaining points. When
/// fewer than m1+1 points exist every f1 is tried.
pub fn exhaustive_b_check(ctx: &FreenessContext, m1: usize, m2: usize, cap: u128) -> Result<ExhaustiveOutcome> {
    let field = ctx.field();
    let big_q = ctx.size();
    let pn = ctx.primitive_normal_elements();
    let bad: Vec<u32> = field.elements().filter(|&a| !ctx.is_primitive(a)).collect();
    let f2_count: u128 = (0..=m2 as u32).map(|d| (big_q as u128).pow(d)).sum();
    let per_f2 =
        if pn.len() > m1 { (bad.len() as u128).pow(m1 as u32 + 1) } else { (big_q as u128).pow(m1 as u32 + 1) };
    let estimated = f2_count.saturating_mul(per_f2);
    if estimated > cap {
        return Ok(ExhaustiveOutcome::Unresolved { estimated_work: estimated, cap });
    }
    let f2_list: Vec<Poly> =
        (0..=m2).flat_map(|d| (0..big_q.pow(d as u32)).map(move |i| Poly::monic_from_index(big_q, d, i))).collect();

    let found = f2_list.par_iter().find_map_first(|f2| search_f2(ctx, &pn, &bad, f2, m1, m2));
    Ok(match found {
        Some(f) => ExhaustiveOutcome::NotInB { failing: f },
        None => ExhaustiveOutcome::InB { functions_checked: upsilon_size_hint(f2_count, big_q, m1) },
    })
}

fn upsilon_size_hint(f2_count: u128, big_q: u64, m1: usize) -> u64 {
    (f2_count * ((big_q as u128).pow(m1 as u32 + 1) - 1)).min(u64::MAX as u128) as u64
}

/// First failing f1/f2 in Υ for a fixed f2, in enumeration order.
fn search_f2(ctx: &FreenessContext, pn: &[u32], bad: &[u32], f2: &Poly, m1: usize, m2: usize) -> Option<RationalFn> {
    let field = ctx.field();
    let pts: Vec<u32> = pn.iter().copied().filter(|&a| f2.eval(field, a) != 0).collect();
    let is_bad = |v: u32| !ctx.is_primitive(v);
    let fails_everywhere =
        |f1: &Poly, skip: usize| pts[skip..].iter().all(|&a| is_bad(field.div(f1.eval(field, a), f2.eval(field, a))));
    let accept = |f1: Poly| -> Option<RationalFn> {
        if f1.is_zero() || !f1.gcd(field, f2).is_one() {
            return None;
        }
        let f = RationalFn { f1, f2: f2.clone(), m1, m2 };
        match in_upsilon(&f, field, CoefficientDomain::TopField) {
            Ok(v) if v.member => Some(f),
            _ => None,
        }
    };
    let big_q = field.size();
    if pts.len() <= m1 {
        let total = big_q.pow(m1 as u32 + 1);
        for code in 1..total {
            let f1 = Poly::new(to_digits(code, big_q, m1 + 1));
            if fails_everywhere(&f1, 0) {
                if let Some(f) = accept(f1) {
                    return Some(f);
                }
            }
        }
        return None;
    }
    let xs = &pts[..=m1];
    let scale: Vec<u32> = xs.iter().map(|&a| f2.eval(field, a)).collect();
    let k = m1 + 1;
    let nb = bad.len();
    let mut idx = vec![0usize; k];
    loop {
        let ys: Vec<u32> = (0..k).map(|i| field.mul(scale[i], bad[idx[i]])).collect();
        let f1 = interpolate(field, xs, &ys);
        if fails_everywhere(&f1, k) {
            if let Some(f) = accept(f1) {
                return Some(f);
            }
        }
        // odometer, last coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < nb {
                break;
            }
            idx[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_trivial_count() {
        let ctx = FreenessContext::new(2, 1, 2).unwrap();
        let f = RationalFn::new(ctx.field(), Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2).unwrap();
        let one = FactoredInteger::one();
        let g = FactoredPoly { unit: 1, factors: vec![] };
        let r = count_nf_direct(&ctx, &f, &one, &one, &g, 16).unwrap();
        assert_eq!(r.n_f, 1);
        assert_eq!(r.witnesses, vec![1]);
    }

    #[test]
    fn counterexample_2_6() {
        let ctx = FreenessContext::new(2, 1, 6).unwrap();
        let f = RationalFn::new(ctx.field(), Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2).unwrap();
        assert!(verify_counterexample(&ctx, &f).confirmed);
        let g = RationalFn::new(ctx.field(), Poly::x(), Poly::one(), 3, 2).unwrap();
        assert!(!verify_counterexample(&ctx, &g).confirmed);
    }

    #[test]
    fn known_functions() {
        for (p, n) in [(2, 6), (3, 3), (3, 4)] {
            let ctx = FreenessContext::new(p, 1, n).unwrap();
            let f = known_counterexample(&ctx).unwrap().unwrap();
            assert!(in_upsilon(&f, ctx.field(), CoefficientDomain::TopField).unwrap().member);
            assert!(verify_counterexample(&ctx, &f).confirmed, "({p},{n})");
        }
    }

    #[test]
    fn exhaustive_small() {
        let ctx = FreenessContext::new(2, 1, 3).unwrap();
        assert!(matches!(
            exhaustive_b_check(&ctx, 3, 2, DEFAULT_EXHAUSTIVE_CAP).unwrap(),
            ExhaustiveOutcome::NotInB { .. }
        ));
        let ctx = FreenessContext::new(2, 1, 5).unwrap();
        assert!(matches!(
            exhaustive_b_check(&ctx, 3, 2, DEFAULT_EXHAUSTIVE_CAP).unwrap(),
            ExhaustiveOutcome::InB { .. }
        ));
        assert!(matches!(exhaustive_b_check(&ctx, 3, 2, 10).unwrap(), ExhaustiveOutcome::Unresolved { .. }));
    }
}
