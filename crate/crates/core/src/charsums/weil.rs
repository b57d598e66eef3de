//! Empirical validation of the Weil-type bounds for
//! Σ χ(v(α)) and Σ χ(v(α)) ψ(u(α)).

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::characters::{AddCharacter, CharContext, MultCharacter};
use crate::error::Result;
use crate::ffpoly::{factor, Poly};
use crate::upsilon::RationalFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilData {
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    pub d4: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// The non-degeneracy hypothesis was verified.
    Verified,
    /// The hypothesis could not be established; the bound is not guaranteed.
    Unchecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub hypothesis: Hypothesis,
    pub data: WeilData,
}

/// A sum to check: v, optional u, χ and ψ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilInstance {
    pub v: RationalFn,
    pub u: Option<RationalFn>,
    pub chi: MultCharacter,
    pub psi: AddCharacter,
}

fn random_poly<R: Rng>(rng: &mut R, size: u64, max_deg: usize, monic: bool) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    let mut c: Vec<u32> = (0..=d).map(|_| rng.gen_range(0..size) as u32).collect();
    if monic || c[d] == 0 {
        c[d] = 1;
    }
    Poly::new(c)
}

impl CharContext<'_> {
    /// Draws instances until one satisfies the non-degeneracy hypothesis.
    /// Degrees of numerators and denominators stay at most `max_deg`.
    pub fn random_instance<R: Rng>(&self, rng: &mut R, max_deg: usize, with_u: bool) -> Result<WeilInstance> {
        let field = self.freeness().field();
        let size = field.size();
        let m = size - 1;
        let divisors: Vec<u64> = (2..=m).filter(|d| m.is_multiple_of(*d)).collect();
        if divisors.is_empty() {
            return Err(crate::error::Error::domain("no nontrivial multiplicative character"));
        }
        for _ in 0..10_000 {
            let d = divisors[rng.gen_range(0..divisors.len())];
            let chars = self.mult_characters_of_order(d)?;
            let chi = chars[rng.gen_range(0..chars.len())];
            let f1 = random_poly(rng, size, max_deg, false);
            let f2 = random_poly(rng, size, max_deg, true);
            if f1.deg() + f2.deg() == 0 {
                continue;
            }
            let v = RationalFn::new(field, f1, f2, max_deg, max_deg)?;
            let (u, psi) = if with_u {
                let u = RationalFn::new(
                    field,
                    random_poly(rng, size, max_deg, false),
                    random_poly(rng, size, max_deg, true),
                    max_deg,
                    max_deg,
                )?;
                (Some(u), AddCharacter { c: rng.gen_range(1..size) as u32 })
            } else {
                (None, AddCharacter { c: 0 })
            };
            let inst = WeilInstance { v, u, chi, psi };
            if self.weil_check(&inst.v, inst.u.as_ref(), &inst.chi, &inst.psi)?.hypothesis == Hypothesis::Verified {
                return Ok(inst);
            }
        }
        Err(crate::error::Error::domain("no valid instance found"))
    }

    /// Evaluates the sum by enumeration and compares with the bound
    /// (D1 − 1)·Q^{1/2} without `u`, (D1 + D2 + D3 + D4 − 1)·Q^{1/2} with it.
    pub fn weil_check(
        &self,
        v: &RationalFn,
        u: Option<&RationalFn>,
        chi: &MultCharacter,
        psi: &AddCharacter,
    ) -> Result<WeilReport> {
        let field = self.freeness().field();
        let big_q = field.size();
        let num = factor(field, &v.f1)?;
        let den = factor(field, &v.f2)?;
        // s_j with nonzero exponents n_j (num and den are coprime)
        let mut s: Vec<(Poly, i64)> = num.factors.iter().map(|(p, e)| (p.clone(), *e as i64)).collect();
        s.extend(den.factors.iter().map(|(p, e)| (p.clone(), -(*e as i64))));
        let d1: u64 = s.iter().map(|(p, _)| p.deg() as u64).sum();

        let mut data = WeilData { d1, d2: 0, d3: 0, d4: 0 };
        let ord = chi.order() as i64;
        // v is an ord(χ)-th power over the closure iff every n_j is divisible by ord(χ)
        let v_ok = s.iter().any(|(_, e)| e % ord != 0);

        let (hyp, rhs_factor) = match u {
            None => (v_ok, d1 as f64 - 1.0),
            Some(u) => {
                let ud = factor(field, &u.f2)?;
                data.d2 = (u.f1.deg() as i64 - u.f2.deg() as i64).max(0) as u64;
                data.d3 = u.f2.deg() as u64;
                data.d4 = ud
                    .factors
                    .iter()
                    .filter(|(p, _)| !s.iter().any(|(q, _)| q == p))
                    .map(|(p, _)| p.deg() as u64)
                    .sum();
                // a pole of u whose order is not divisible by Q rules out u = r^Q − r
                let inf_pole = u.f1.deg() as i64 - u.f2.deg() as i64;
                let pole_ok = (inf_pole > 0 && !(inf_pole as u64).is_multiple_of(big_q))
                    || ud.factors.iter().any(|(_, e)| !(*e as u64).is_multiple_of(big_q));
                (pole_ok && !psi.is_trivial(), (data.d1 + data.d2 + data.d3 + data.d4) as f64 - 1.0)
            }
        };

        let mut sum = Complex64::zero();
        for a in field.elements() {
            let Some(va) = v.evaluate(field, a) else { continue };
            if va == 0 {
                continue;
            }
            let mut term = self.mult_value(chi, va);
            if let Some(u) = u {
                let Some(ua) = u.evaluate(field, a) else { continue };
                term *= self.add_value(psi, ua);
            }
            sum += term;
        }
        let lhs = sum.norm();
        let rhs = rhs_factor * (big_q as f64).sqrt();
        Ok(WeilReport {
            lhs,
            rhs,
            holds: lhs <= rhs + 1e-6,
            hypothesis: if hyp { Hypothesis::Verified } else { Hypothesis::Unchecked },
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeness::FreenessContext;

    #[test]
    fn examples() {
        let ctx = FreenessContext::new(3, 1, 2).unwrap();
        let cc = CharContext::new(&ctx).unwrap();
        let f = ctx.field();
        let chi = cc.mult_characters_of_order(8).unwrap()[0];
        let v = RationalFn::new(f, Poly::x(), Poly::one(), 1, 0).unwrap();
        let r = cc.weil_check(&v, None, &chi, &AddCharacter { c: 0 }).unwrap();
        assert!(r.lhs < 1e-9 && r.rhs == 0.0 && r.holds);
        assert_eq!(r.hypothesis, Hypothesis::Verified);

        let v = RationalFn::new(f, Poly::new(vec![0, 1, 1]), Poly::one(), 2, 0).unwrap();
        let r = cc.weil_check(&v, None, &chi, &AddCharacter { c: 0 }).unwrap();
        assert!(r.holds && (r.rhs - 3.0).abs() < 1e-12);

        let u = RationalFn::new(f, Poly::x(), Poly::one(), 1, 0).unwrap();
        let r = cc.weil_check(&v, Some(&u), &chi, &AddCharacter { c: 1 }).unwrap();
        assert_eq!(r.hypothesis, Hypothesis::Verified);
        assert_eq!(r.data, WeilData { d1: 2, d2: 1, d3: 0, d4: 0 });
        assert!(r.holds);

        // constant u is of the excluded form
        let u = RationalFn::new(f, Poly::constant(2), Poly::one(), 0, 0).unwrap();
        let r = cc.weil_check(&v, Some(&u), &chi, &AddCharacter { c: 1 }).unwrap();
        assert_eq!(r.hypothesis, Hypothesis::Unchecked);
    }
}
