//! Decision rules based on 𝔑(q, n) and the ordered classification pipeline.

use std::time::Duration;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::recipe::{EllSpec, GSpec, PairData};
use super::sieve::{
    bounded_corollary, corollary_condition, sieve_condition, BoundedCorollaryReport, CorollaryReport, SieveReport,
};
use crate::error::{Error, Result};
use crate::freeness::FreenessContext;
use crate::ntheory::prime_power;
use crate::search::{exhaustive_b_check, ExhaustiveOutcome, DEFAULT_EXHAUSTIVE_CAP};

/// Largest q^n for which 𝔑 is computed by enumeration.
pub const DEFAULT_COUNT_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoBbCertificate {
    pub big_n: u64,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YesBbCertificate {
    pub big_n: u64,
    pub phi: String,
    pub m: u64,
    /// 𝔑 + m·φ(q^n − 1).
    pub lhs: String,
    /// m·(q^n + 1).
    pub rhs: String,
    pub characteristic_two: bool,
}

fn field_parts(q: u64, n: u32, cap: u64) -> Result<(u32, u32, u64)> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    let size = (q as u128).checked_pow(n).filter(|&s| s <= cap as u128);
    let size =
        size.ok_or_else(|| Error::cap("field size for enumeration", (q as u128).saturating_pow(n), cap as u128))?;
    Ok((p as u32, k, size as u64))
}

/// 𝔑(q, n) by enumeration, limited to q^n ≤ cap.
pub fn primitive_normal_count(q: u64, n: u32, cap: u64) -> Result<u64> {
    let (p, k, _) = field_parts(q, n, cap)?;
    Ok(FreenessContext::with_cap(p, k, n, cap)?.count_primitive_normal())
}

/// Fires when 𝔑(q, n) ≤ m1 + m2 + 1.
pub fn decide_no_bb(q: u64, n: u32, m1: usize, m2: usize, cap: u64) -> Result<Option<NoBbCertificate>> {
    if n < 3 {
        return Err(Error::domain("the rule needs n >= 3"));
    }
    let big_n = primitive_normal_count(q, n, cap)?;
    Ok(no_bb_from_count(big_n, m1, m2))
}

fn no_bb_from_count(big_n: u64, m1: usize, m2: usize) -> Option<NoBbCertificate> {
    let bound = (m1 + m2 + 1) as u64;
    (big_n <= bound).then_some(NoBbCertificate { big_n, bound })
}

/// Fires when 𝔑/m + φ(q^n − 1) > q^n + 1 with m = max(m1, m2), checked as
/// 𝔑 + m·φ > m·(q^n + 1). Stated for q = 2^k; other q need
/// `allow_any_characteristic`.
pub fn decide_yes_bb(
    q: u64,
    n: u32,
    m1: usize,
    m2: usize,
    cap: u64,
    allow_any_characteristic: bool,
) -> Result<Option<YesBbCertificate>> {
    if n < 3 {
        return Err(Error::domain("the rule needs n >= 3"));
    }
    let (p, _, _) = field_parts(q, n, cap)?;
    if p != 2 && !allow_any_characteristic {
        return Err(Error::domain("the rule is only established for q a power of 2"));
    }
    let big_n = primitive_normal_count(q, n, cap)?;
    let phi = crate::ntheory::factor_u64(q.pow(n) - 1)?.euler_phi()?;
    Ok(yes_bb_from_count(q, n, big_n, &phi, m1, m2, p == 2))
}

fn yes_bb_from_count(
    q: u64,
    n: u32,
    big_n: u64,
    phi: &BigUint,
    m1: usize,
    m2: usize,
    two: bool,
) -> Option<YesBbCertificate> {
    let m = m1.max(m2).max(1) as u64;
    let lhs = BigUint::from(big_n) + phi * m;
    let rhs = (BigUint::from(q).pow(n) + 1u32) * m;
    (lhs > rhs).then(|| YesBbCertificate {
        big_n,
        phi: phi.to_string(),
        m,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        characteristic_two: two,
    })
}

/// One step of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Rule {
    Corollary,
    /// The corollary with W(q^n − 1) replaced by its A_t bound.
    CorollaryBound {
        t: f64,
        exclude_characteristic: bool,
    },
    Sieve {
        ell: EllSpec,
        g: GSpec,
    },
    NoBb,
    YesBb {
        allow_any_characteristic: bool,
    },
    Exhaustive {
        cap: u128,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Corollary => "corollary",
            Rule::CorollaryBound { .. } => "corollary-bound",
            Rule::Sieve { .. } => "sieve",
            Rule::NoBb => "noBb",
            Rule::YesBb { .. } => "yesBb",
            Rule::Exhaustive { .. } => "exhaustive",
        }
    }
}

/// The escalation used for n ≥ 6 and small q: the A_8-bounded corollary,
/// then the gcd-210 sieve with g = 1, then with the linear factors.
pub fn bounded_strategy() -> Vec<Rule> {
    vec![
        Rule::CorollaryBound { t: 8.0, exclude_characteristic: false },
        Rule::Sieve { ell: EllSpec::Gcd(210), g: GSpec::One },
        Rule::Sieve { ell: EllSpec::Gcd(210), g: GSpec::Linear },
    ]
}

/// Corollary, then the gcd-210 sieve with g = 1 and with the linear factors,
/// then the 𝔑 rules, then exhaustive search.
pub fn default_strategy() -> Vec<Rule> {
    vec![
        Rule::Corollary,
        Rule::Sieve { ell: EllSpec::Gcd(210), g: GSpec::One },
        Rule::Sieve { ell: EllSpec::Gcd(210), g: GSpec::Linear },
        Rule::NoBb,
        Rule::YesBb { allow_any_characteristic: false },
        Rule::Exhaustive { cap: DEFAULT_EXHAUSTIVE_CAP },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    ProvedInB,
    ProvedNotInB,
    Unresolved,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    Corollary(CorollaryReport),
    CorollaryBound(BoundedCorollaryReport),
    Sieve(SieveReport),
    NoBb(NoBbCertificate),
    YesBb(YesBbCertificate),
    ExhaustiveInB { functions_checked: u64 },
    ExhaustiveNotInB { failing: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairClassification {
    pub q: u64,
    pub n: u32,
    pub m1: usize,
    pub m2: usize,
    pub status: Status,
    /// The rule that decided, if any.
    pub rule: Option<Rule>,
    pub certificate: Option<Certificate>,
    /// Last sieve report seen, kept for undecided pairs.
    pub last_sieve: Option<SieveReport>,
    /// Why rules were skipped or failed.
    pub notes: Vec<String>,
}

impl PairClassification {
    /// The sieve report behind the verdict, or the last one tried.
    pub fn sieve(&self) -> Option<&SieveReport> {
        match &self.certificate {
            Some(Certificate::Sieve(s)) => Some(s),
            _ => self.last_sieve.as_ref(),
        }
    }
}

/// Settings shared by every rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Factoring budget per cyclotomic piece of q^n − 1.
    pub budget: Duration,
    /// Largest q^n enumerated for 𝔑 and exhaustive search.
    pub count_cap: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { budget: crate::ntheory::DEFAULT_BUDGET, count_cap: DEFAULT_COUNT_CAP }
    }
}

#[allow(clippy::large_enum_variant)]
enum Step {
    Decided(Status, Certificate),
    Pass,
}

/// Applies the rules in order and stops at the first decisive one.
pub fn classify_pair(
    q: u64,
    n: u32,
    m1: usize,
    m2: usize,
    strategy: &[Rule],
    opts: &ClassifyOptions,
) -> PairClassification {
    let mut out = PairClassification {
        q,
        n,
        m1,
        m2,
        status: Status::Unresolved,
        rule: None,
        certificate: None,
        last_sieve: None,
        notes: Vec::new(),
    };
    if prime_power(q).is_none() || n == 0 {
        out.status = Status::Indeterminate;
        out.notes.push(format!("({q},{n}) is not a valid pair"));
        return out;
    }
    let mut cache = Cache { q, n, opts, data: None, big_n: None };
    let mut indeterminate = false;
    for rule in strategy {
        match run_rule(m1, m2, rule, &mut cache, &mut out) {
            Ok(Step::Decided(status, cert)) => {
                out.status = status;
                out.rule = Some(rule.clone());
                out.certificate = Some(cert);
                return out;
            }
            Ok(Step::Pass) => {}
            Err(e) => {
                if e.is_indeterminate() {
                    indeterminate = true;
                }
                out.notes.push(format!("{}: {e}", rule.name()));
            }
        }
    }
    if indeterminate {
        out.status = Status::Indeterminate;
    }
    out
}

/// Per-pair values computed at most once.
struct Cache<'a> {
    q: u64,
    n: u32,
    opts: &'a ClassifyOptions,
    data: Option<Result<PairData>>,
    big_n: Option<Result<u64>>,
}

impl Cache<'_> {
    fn data(&mut self) -> Result<&PairData> {
        let (q, n, budget) = (self.q, self.n, self.opts.budget);
        self.data.get_or_insert_with(|| PairData::new(q, n, budget)).as_ref().map_err(Clone::clone)
    }

    fn big_n(&mut self) -> Result<u64> {
        let (q, n, cap) = (self.q, self.n, self.opts.count_cap);
        self.big_n.get_or_insert_with(|| primitive_normal_count(q, n, cap)).clone()
    }
}

fn run_rule(m1: usize, m2: usize, rule: &Rule, cache: &mut Cache, out: &mut PairClassification) -> Result<Step> {
    let (q, n) = (cache.q, cache.n);
    match rule {
        Rule::Corollary => {
            let rep = corollary_condition(cache.data()?, m1, m2)?;
            Ok(if rep.holds { Step::Decided(Status::ProvedInB, Certificate::Corollary(rep)) } else { Step::Pass })
        }
        Rule::CorollaryBound { t, exclude_characteristic } => {
            let rep = bounded_corollary(q, n, m1, m2, *t, *exclude_characteristic)?;
            Ok(if rep.holds { Step::Decided(Status::ProvedInB, Certificate::CorollaryBound(rep)) } else { Step::Pass })
        }
        Rule::Sieve { ell, g } => {
            let rep = sieve_condition(cache.data()?, m1, m2, ell, g)?;
            if rep.holds {
                Ok(Step::Decided(Status::ProvedInB, Certificate::Sieve(rep)))
            } else {
                out.last_sieve = Some(rep);
                Ok(Step::Pass)
            }
        }
        Rule::NoBb => {
            if n < 3 {
                return Err(Error::domain("needs n >= 3"));
            }
            let c = cache.big_n()?;
            Ok(match no_bb_from_count(c, m1, m2) {
                Some(cert) => Step::Decided(Status::ProvedNotInB, Certificate::NoBb(cert)),
                None => Step::Pass,
            })
        }
        Rule::YesBb { allow_any_characteristic } => {
            if n < 3 {
                return Err(Error::domain("needs n >= 3"));
            }
            let (p, _) = prime_power(q).unwrap();
            if p != 2 && !allow_any_characteristic {
                return Err(Error::domain("only established for q a power of 2"));
            }
            let c = cache.big_n()?;
            let phi = cache.data()?.order.euler_phi()?;
            Ok(match yes_bb_from_count(q, n, c, &phi, m1, m2, p == 2) {
                Some(cert) => Step::Decided(Status::ProvedInB, Certificate::YesBb(cert)),
                None => Step::Pass,
            })
        }
        Rule::Exhaustive { cap } => {
            let cap_q = cache.opts.count_cap;
            let (p, k, _) = field_parts(q, n, cap_q)?;
            let ctx = FreenessContext::with_cap(p, k, n, cap_q)?;
            Ok(match exhaustive_b_check(&ctx, m1, m2, *cap)? {
                ExhaustiveOutcome::InB { functions_checked } => {
                    Step::Decided(Status::ProvedInB, Certificate::ExhaustiveInB { functions_checked })
                }
                ExhaustiveOutcome::NotInB { failing } => {
                    Step::Decided(Status::ProvedNotInB, Certificate::ExhaustiveNotInB { failing: failing.to_text() })
                }
                ExhaustiveOutcome::Unresolved { estimated_work, cap } => {
                    out.notes.push(format!("exhaustive: estimated work {estimated_work} exceeds cap {cap}"));
                    Step::Pass
                }
            })
        }
    }
}

/// Re-runs the deciding rule of a classification and checks that it yields
/// the same status and certificate.
pub fn replay(c: &PairClassification, opts: &ClassifyOptions) -> Result<bool> {
    let Some(rule) = &c.rule else {
        return Err(Error::invalid("classification carries no certificate"));
    };
    let again = classify_pair(c.q, c.n, c.m1, c.m2, std::slice::from_ref(rule), opts);
    Ok(again.status == c.status && again.certificate == c.certificate)
}

/// Classifies many pairs in parallel; output sorted by (q, n).
pub fn classify_many(
    pairs: &[(u64, u32)],
    m1: usize,
    m2: usize,
    strategy: &[Rule],
    opts: &ClassifyOptions,
) -> Vec<PairClassification> {
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    pairs.par_iter().map(|&(q, n)| classify_pair(q, n, m1, m2, strategy, opts)).collect()
}
