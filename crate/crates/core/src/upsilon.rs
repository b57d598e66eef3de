//! Reduced rational functions f1/f2 over F_{q^n} and membership in Υ(m1, m2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::field::to_digits;
use crate::ffpoly::{factor, Field, Poly, SmallField};

/// Where the coefficients of f1 and f2 may live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CoefficientDomain {
    /// Any element of F_{q^n}.
    #[default]
    TopField,
    /// Only the subfield F_q (codes below q).
    BaseField,
}

/// f1/f2 with gcd(f1, f2) = 1 and f2 ≠ 0. Scalars are not normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFn {
    pub f1: Poly,
    pub f2: Poly,
    pub m1: usize,
    pub m2: usize,
}

impl RationalFn {
    /// Cancels gcd(f1, f2), keeping the leading coefficient of f2.
    pub fn new<F: Field>(field: &F, f1: Poly, f2: Poly, m1: usize, m2: usize) -> Result<Self> {
        if f2.is_zero() {
            return Err(Error::domain("denominator of a rational function is zero"));
        }
        let g = f1.gcd(field, &f2);
        let (f1, f2) =
            if g.is_one() || g.is_zero() { (f1, f2) } else { (f1.div_exact(field, &g), f2.div_exact(field, &g)) };
        Ok(RationalFn { f1, f2, m1, m2 })
    }

    pub fn within_caps(&self) -> bool {
        self.f1.degree().unwrap_or(0) <= self.m1 && self.f2.deg() <= self.m2
    }

    /// f1(α)/f2(α), or `None` when f2(α) = 0.
    pub fn evaluate<F: Field>(&self, field: &F, alpha: u32) -> Option<u32> {
        let d = self.f2.eval(field, alpha);
        if d == 0 {
            None
        } else {
            Some(field.div(self.f1.eval(field, alpha), d))
        }
    }

    /// α ∈ S_f: α = 0 or f1(α)·f2(α) = 0.
    pub fn is_exceptional<F: Field>(&self, field: &F, alpha: u32) -> bool {
        alpha == 0 || self.f1.eval(field, alpha) == 0 || self.f2.eval(field, alpha) == 0
    }

    /// S_f by enumeration, increasing.
    pub fn exceptional_set(&self, field: &SmallField) -> Vec<u32> {
        field.elements().filter(|&a| self.is_exceptional(field, a)).collect()
    }

    pub fn to_text(&self) -> String {
        crate::ffpoly::encode::format_rational(&self.f1, &self.f2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonVerdict {
    pub member: bool,
    /// First irreducible t ≠ x of f1·f2 (in sorted order) with multiplicity a coprime to Q − 1.
    pub witness: Option<(Poly, u32)>,
    pub reason: String,
}

/// Membership of f in Υ over the field it is defined on.
pub fn in_upsilon(f: &RationalFn, field: &SmallField, domain: CoefficientDomain) -> Result<UpsilonVerdict> {
    let no = |reason: &str| Ok(UpsilonVerdict { member: false, witness: None, reason: reason.to_string() });
    if !f.within_caps() {
        return no("degree caps violated");
    }
    if f.f2.is_zero() || f.f1.is_zero() {
        return no("f1 or f2 is zero");
    }
    if domain == CoefficientDomain::BaseField {
        let q = field.q() as u32;
        if f.f1.coeffs().iter().chain(f.f2.coeffs()).any(|&c| c >= q) {
            return no("coefficient outside F_q");
        }
    }
    if !f.f1.gcd(field, &f.f2).is_one() {
        return no("f1 and f2 not coprime");
    }
    let prod = f.f1.mul(field, &f.f2);
    let fp = factor(field, &prod)?;
    let qm1 = field.size() - 1;
    let x = Poly::x();
    for (t, a) in &fp.factors {
        if *t != x && num_integer::gcd(*a as u64, qm1) == 1 {
            return Ok(UpsilonVerdict { member: true, witness: Some((t.clone(), *a)), reason: "witness found".into() });
        }
    }
    no("no irreducible factor other than x with multiplicity coprime to Q - 1")
}

/// Deterministic cursor over Υ(m1, m2): f2 monic by degree then code,
/// f1 by code. Each rational function appears once.
#[derive(Debug, Clone)]
pub struct UpsilonStream<'a> {
    field: &'a SmallField,
    m1: usize,
    m2: usize,
    domain: CoefficientDomain,
    coeff_count: u64,
    f2_deg: usize,
    f2_index: u64,
    f1_code: u64,
    f1_total: u64,
}

/// Number of (f1, f2) candidate pairs the stream visits.
pub fn upsilon_candidates(field: &SmallField, m1: usize, m2: usize, domain: CoefficientDomain) -> u128 {
    let c = match domain {
        CoefficientDomain::TopField => field.size(),
        CoefficientDomain::BaseField => field.q(),
    } as u128;
    let f2: u128 = (0..=m2 as u32).map(|d| c.pow(d)).sum();
    f2.saturating_mul(c.saturating_pow(m1 as u32 + 1))
}

pub fn enumerate_upsilon<'a>(
    field: &'a SmallField,
    m1: usize,
    m2: usize,
    cap: u128,
    domain: CoefficientDomain,
) -> Result<UpsilonStream<'a>> {
    let needed = upsilon_candidates(field, m1, m2, domain);
    if needed > cap {
        return Err(Error::cap("rational functions to enumerate", needed, cap));
    }
    let coeff_count = match domain {
        CoefficientDomain::TopField => field.size(),
        CoefficientDomain::BaseField => field.q(),
    };
    Ok(UpsilonStream {
        field,
        m1,
        m2,
        domain,
        coeff_count,
        f2_deg: 0,
        f2_index: 0,
        f1_code: 1,
        f1_total: coeff_count.pow(m1 as u32 + 1),
    })
}

impl Iterator for UpsilonStream<'_> {
    type Item = RationalFn;

    fn next(&mut self) -> Option<RationalFn> {
        loop {
            if self.f2_deg > self.m2 {
                return None;
            }
            if self.f1_code >= self.f1_total {
                self.f1_code = 1;
                self.f2_index += 1;
                if self.f2_index >= self.coeff_count.pow(self.f2_deg as u32) {
                    self.f2_index = 0;
                    self.f2_deg += 1;
                }
                continue;
            }
            let c = self.coeff_count;
            let f1 = Poly::new(to_digits(self.f1_code, c, self.m1 + 1));
            self.f1_code += 1;
            let f2 = Poly::monic_from_index(c, self.f2_deg, self.f2_index);
            if !f1.gcd(self.field, &f2).is_one() {
                continue;
            }
            let f = RationalFn { f1, f2, m1: self.m1, m2: self.m2 };
            match in_upsilon(&f, self.field, self.domain) {
                Ok(v) if v.member => return Some(f),
                _ => continue,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32, k: u32, n: u32) -> SmallField {
        SmallField::build(p, k, n).unwrap().1
    }

    #[test]
    fn spec_examples() {
        let f64_ = field(2, 1, 6);
        let f = RationalFn::new(&f64_, Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2).unwrap();
        let v = in_upsilon(&f, &f64_, CoefficientDomain::TopField).unwrap();
        assert!(v.member);
        let (t, a) = v.witness.unwrap();
        assert_eq!((t.deg(), a), (1, 1));

        let f = RationalFn::new(&f64_, Poly::new(vec![0, 0, 1]), Poly::one(), 3, 2).unwrap();
        assert!(!in_upsilon(&f, &f64_, CoefficientDomain::TopField).unwrap().member);

        let f4 = field(2, 1, 2);
        let f = RationalFn::new(&f4, Poly::new(vec![1, 0, 1]), Poly::one(), 3, 2).unwrap();
        let v = in_upsilon(&f, &f4, CoefficientDomain::TopField).unwrap();
        assert_eq!(v.witness, Some((Poly::new(vec![1, 1]), 2)));

        let f = RationalFn::new(&f4, Poly::new(vec![1, 1, 1]), Poly::one(), 3, 2).unwrap();
        assert_eq!(f.exceptional_set(&f4).len(), 3);
        let g = RationalFn::new(&f4, Poly::one(), Poly::x(), 1, 1).unwrap();
        assert_eq!(g.evaluate(&f4, 0), None);
        let id = RationalFn::new(&f4, Poly::x(), Poly::one(), 1, 0).unwrap();
        assert_eq!(id.evaluate(&f4, 3), Some(3));
    }

    #[test]
    fn f4_linear_stream() {
        let f4 = field(2, 1, 2);
        let got: Vec<RationalFn> =
            enumerate_upsilon(&f4, 1, 0, 1 << 20, CoefficientDomain::TopField).unwrap().collect();
        // f = a x + b with a ≠ 0, b ≠ 0: 9 functions; x-multiples excluded
        assert_eq!(got.len(), 9);
        assert!(got.iter().all(|f| f.f1.coeff(0) != 0 && f.f1.deg() == 1));
    }

    #[test]
    fn gcd_reduction() {
        let f4 = field(2, 1, 2);
        let x1 = Poly::new(vec![1, 1]);
        let f = RationalFn::new(&f4, x1.mul(&f4, &Poly::new(vec![2, 1])), x1.clone(), 2, 1).unwrap();
        assert_eq!(f.f1, Poly::new(vec![2, 1]));
        assert!(f.f2.is_one());
    }
}
