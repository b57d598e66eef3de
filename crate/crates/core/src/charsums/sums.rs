//! ρ_s, κ_g, the hybrid sums χ̃_f and the character expansion of N_f.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::characters::{AddCharacter, CharContext, MultCharacter};
use crate::error::{Error, Result};
use crate::ffpoly::xn1::{moebius_poly, phi_q, squarefree_divisors};
use crate::ffpoly::FactoredPoly;
use crate::ntheory::FactoredInteger;
use crate::upsilon::RationalFn;

/// Tolerance for rounding a characteristic-function value to {0, 1}.
pub const INDICATOR_TOLERANCE: f64 = 1e-6;

/// Rounds to 0 or 1, failing when the value is further than the tolerance.
pub fn round_indicator(z: Complex64) -> Result<u8> {
    let nearest = z.re.round();
    let err = (z - Complex64::new(nearest, 0.0)).norm();
    if err > INDICATOR_TOLERANCE || !(nearest == 0.0 || nearest == 1.0) {
        return Err(Error::Tolerance { value: z.re, nearest, tolerance: INDICATOR_TOLERANCE });
    }
    Ok(nearest as u8)
}

fn big_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Square-free divisors of `s` with μ(d)/φ(d).
fn mult_terms(s: &FactoredInteger) -> Result<Vec<(u64, f64)>> {
    let mut out = Vec::new();
    for d in s.squarefree_divisors()? {
        let fd = s.restrict(&d)?;
        let w = fd.moebius()? as f64 / big_f64(&fd.euler_phi()?);
        out.push((d.to_u64().ok_or_else(|| Error::invalid("divisor too large"))?, w));
    }
    Ok(out)
}

/// Square-free divisors of g with μ'(h)/Φ(h).
fn add_terms(q: u64, g: &FactoredPoly) -> Vec<(FactoredPoly, f64)> {
    squarefree_divisors(g)
        .into_iter()
        .map(|h| {
            let w = moebius_poly(&h) as f64 / big_f64(&phi_q(q, &h));
            (h, w)
        })
        .collect()
}

impl CharContext<'_> {
    /// ρ_s(α) = θ(s) Σ_{d|s} μ(d)/φ(d) Σ_{χ of order d} χ(α).
    pub fn rho(&self, alpha: u32, s: &FactoredInteger) -> Result<Complex64> {
        if alpha == 0 {
            return Err(Error::domain("rho is defined on nonzero elements"));
        }
        let theta = s.theta()?.to_f64().unwrap();
        let m = self.freeness().field().log(alpha);
        let mut acc = Complex64::zero();
        for (d, w) in mult_terms(s)? {
            let inner: Complex64 = self.mult_characters_of_order(d)?.iter().map(|chi| chi.at_log(m)).sum();
            acc += inner * w;
        }
        Ok(acc * theta)
    }

    /// κ_g(β) = Φ(g)/N(g) Σ_{h|g} μ'(h)/Φ(h) Σ_{Ord ψ = h} ψ(β).
    pub fn kappa(&self, beta: u32, g: &FactoredPoly) -> Result<Complex64> {
        let q = self.freeness().q();
        let deg: u32 = g.factors.iter().map(|(p, e)| p.deg() as u32 * e).sum();
        let pref = big_f64(&phi_q(q, g)) / big_f64(&BigUint::from(q).pow(deg));
        let mut acc = Complex64::zero();
        for (h, w) in add_terms(q, g) {
            let inner: Complex64 =
                self.chars_for_divisor(&h)?.iter().map(|&c| self.add_value(&AddCharacter { c }, beta)).sum();
            acc += inner * w;
        }
        Ok(acc * pref)
    }

    /// Σ_{α ∉ S_f} χ1(α)·χ2(f(α))·ψ(α).
    pub fn chi_tilde(
        &self,
        f: &RationalFn,
        chi1: &MultCharacter,
        chi2: &MultCharacter,
        psi: &AddCharacter,
    ) -> Complex64 {
        let pts = self.regular_points(f);
        pts.iter().map(|&(a, la, lf)| chi1.at_log(la) * chi2.at_log(lf) * self.add_value(psi, a)).sum()
    }

    /// (α, log α, log f(α)) for α outside S_f with f(α) ≠ 0.
    fn regular_points(&self, f: &RationalFn) -> Vec<(u32, u64, u64)> {
        let field = self.freeness().field();
        field
            .elements()
            .filter(|&a| !f.is_exceptional(field, a))
            .filter_map(|a| {
                let v = f.evaluate(field, a)?;
                (v != 0).then(|| (a, field.log(a), field.log(v)))
            })
            .collect()
    }

    /// N_f(e1, e2, g) through the full triple character expansion.
    pub fn n_f_by_characters(
        &self,
        f: &RationalFn,
        e1: &FactoredInteger,
        e2: &FactoredInteger,
        g: &FactoredPoly,
    ) -> Result<f64> {
        let q = self.freeness().q();
        let deg: u32 = g.factors.iter().map(|(p, e)| p.deg() as u32 * e).sum();
        let pref = e1.theta()?.to_f64().unwrap() * e2.theta()?.to_f64().unwrap() * big_f64(&phi_q(q, g))
            / big_f64(&BigUint::from(q).pow(deg));

        let pts = self.regular_points(f);
        let mut mult1 = Vec::new();
        for (d, w) in mult_terms(e1)? {
            for chi in self.mult_characters_of_order(d)? {
                mult1.push((chi, w));
            }
        }
        let mut mult2 = Vec::new();
        for (d, w) in mult_terms(e2)? {
            for chi in self.mult_characters_of_order(d)? {
                mult2.push((chi, w));
            }
        }
        let mut adds = Vec::new();
        for (h, w) in add_terms(q, g) {
            for &c in self.chars_for_divisor(&h)? {
                adds.push((AddCharacter { c }, w));
            }
        }
        // per-point additive values, reused across all triples
        let add_vals: Vec<Vec<Complex64>> =
            adds.iter().map(|(psi, _)| pts.iter().map(|&(a, _, _)| self.add_value(psi, a)).collect()).collect();

        let partial: Vec<Complex64> = mult1
            .par_iter()
            .map(|(c1, w1)| {
                let v1: Vec<Complex64> = pts.iter().map(|&(_, la, _)| c1.at_log(la)).collect();
                let mut acc = Complex64::zero();
                for (c2, w2) in &mult2 {
                    let v12: Vec<Complex64> = pts.iter().zip(&v1).map(|(&(_, _, lf), &x)| x * c2.at_log(lf)).collect();
                    for ((_, w3), av) in adds.iter().zip(&add_vals) {
                        let s: Complex64 = v12.iter().zip(av).map(|(x, y)| x * y).sum();
                        acc += s * (w1 * w2 * w3);
                    }
                }
                acc
            })
            .collect();
        let total: Complex64 = partial.into_iter().sum::<Complex64>() * pref;
        if total.im.abs() > 1e-4 {
            return Err(Error::Tolerance { value: total.im, nearest: 0.0, tolerance: 1e-4 });
        }
        Ok(total.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Poly;
    use crate::freeness::FreenessContext;

    #[test]
    fn f8_examples() {
        let ctx = FreenessContext::new(2, 1, 3).unwrap();
        let cc = CharContext::new(&ctx).unwrap();
        let one = FactoredInteger::one();
        let seven = ctx.order_divisor(7).unwrap();
        for a in 1..8u32 {
            assert_eq!(round_indicator(cc.rho(a, &one).unwrap()).unwrap(), 1);
            let want = ctx.is_primitive(a) as u8;
            assert_eq!(round_indicator(cc.rho(a, &seven).unwrap()).unwrap(), want);
        }
        let full = ctx.xn1().clone();
        let trivial = FactoredPoly { unit: 1, factors: vec![] };
        for b in 0..8u32 {
            assert_eq!(round_indicator(cc.kappa(b, &trivial).unwrap()).unwrap(), 1);
            assert_eq!(round_indicator(cc.kappa(b, &full).unwrap()).unwrap(), ctx.is_normal(b) as u8);
        }
    }

    #[test]
    fn expansion_trivial_case() {
        let ctx = FreenessContext::new(2, 1, 2).unwrap();
        let cc = CharContext::new(&ctx).unwrap();
        let f = RationalFn::new(ctx.field(), Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2).unwrap();
        let one = FactoredInteger::one();
        let g = FactoredPoly { unit: 1, factors: vec![] };
        let v = cc.n_f_by_characters(&f, &one, &one, &g).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let t = cc.chi_tilde(&f, &MultCharacter::trivial(), &MultCharacter::trivial(), &AddCharacter { c: 0 });
        assert!((t.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tolerance_error() {
        assert!(round_indicator(Complex64::new(0.5, 0.0)).is_err());
        assert_eq!(round_indicator(Complex64::new(1.0 + 1e-9, 1e-9)).unwrap(), 1);
    }
}
