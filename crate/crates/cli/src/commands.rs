use std::path::Path;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use pnfree::certify::{
    self, bounded_strategy, default_strategy, ClassifyOptions, EllSpec, GSpec, PairClassification, Regime, Rule, Status,
};
use pnfree::charsums::{round_indicator, CharContext};
use pnfree::ffpoly::encode::{format_poly, parse_element, parse_poly, parse_rational};
use pnfree::ffpoly::xn1::monic_divisors;
use pnfree::ffpoly::{factor_xn_minus_1, xn_shape, FactoredPoly, Tower};
use pnfree::freeness::FreenessContext;
use pnfree::ntheory::{factor_integer, FactoredInteger};
use pnfree::search::{count_nf_direct, known_counterexample, verify_counterexample, DEFAULT_WITNESSES};
use pnfree::upsilon::{in_upsilon, CoefficientDomain, RationalFn};

use crate::args::{parse_list, parse_range, Caps, FieldSpec};
use crate::error::CliError;
use crate::output::{csv_writer, Jsonl};
use crate::Outcome;

fn print(v: Value) -> Result<Outcome, CliError> {
    let mut out = Jsonl::open(None)?;
    out.emit(&v)?;
    out.finish()?;
    Ok(Outcome::Done)
}

fn context(field: FieldSpec) -> Result<FreenessContext, CliError> {
    Ok(FreenessContext::with_cap(field.p, field.k, field.n, certify::DEFAULT_COUNT_CAP)?)
}

fn element(field: FieldSpec, text: &str) -> Result<u32, CliError> {
    Ok(parse_element(text, &field.top_sizes())? as u32)
}

fn rational(ctx: &FreenessContext, field: FieldSpec, text: &str, m: Caps) -> Result<RationalFn, CliError> {
    let sizes = field.top_sizes();
    let (f1, f2) = parse_rational(text, &sizes)?;
    Ok(RationalFn::new(ctx.field(), f1, f2, m.m1, m.m2)?)
}

fn order_divisor(ctx: &FreenessContext, e: Option<u64>) -> Result<FactoredInteger, CliError> {
    Ok(match e {
        Some(e) => ctx.order_divisor(e)?,
        None => ctx.factored_order().clone(),
    })
}

fn xn1_divisor(ctx: &FreenessContext, field: FieldSpec, g: &str) -> Result<FactoredPoly, CliError> {
    Ok(match g {
        "full" => ctx.xn1().clone(),
        "one" | "1" => FactoredPoly { unit: 1, factors: vec![] },
        text => ctx.xn1_divisor(&parse_poly(text, &field.base_sizes())?)?,
    })
}

fn factors_json(f: &FactoredInteger) -> Value {
    let list: Vec<Value> = f.factors().iter().map(|(p, e)| json!([p.to_string(), e])).collect();
    json!({
        "value": f.value().to_string(),
        "factors": list,
        "certainty": f.certainty(),
        "cofactor": f.cofactor().map(|c| c.to_string()),
    })
}

pub fn factor(n: &str, budget: Duration) -> Result<Outcome, CliError> {
    let n: BigUint = n.trim().parse().map_err(|_| CliError::Usage(format!("{n:?} is not a non-negative integer")))?;
    if n == BigUint::from(0u32) {
        return Err(CliError::Usage("cannot factor 0".into()));
    }
    let f = factor_integer(&n, budget)?;
    let complete = f.is_complete();
    print(factors_json(&f))?;
    Ok(if complete { Outcome::Done } else { Outcome::Indeterminate })
}

pub fn field_info(field: FieldSpec) -> Result<Outcome, CliError> {
    let tower = Tower::build(field.p, field.k, field.n)?;
    let shape = xn_shape(tower.q(), field.n as u64)?;
    let xn1: Vec<Value> = factor_xn_minus_1(tower.base(), field.n as u64)?
        .factors
        .iter()
        .map(|(p, e)| json!([format_poly(p), e]))
        .collect();
    print(json!({
        "p": field.p,
        "k": field.k,
        "n": field.n,
        "q": tower.q(),
        "order": tower.order().to_string(),
        "base_modulus": format_poly(tower.base_modulus()),
        "top_modulus": format_poly(tower.top_modulus()),
        "generator": tower.code(tower.generator()).to_string(),
        "order_minus_one": factors_json(tower.factored_order()),
        "xn1_factors": xn1,
        "xn1_shape": shape.blocks,
        "s": shape.s(),
        "Wq": shape.wq().to_string(),
    }))
}

pub fn nfree(field: FieldSpec, alpha: &str, e: Option<u64>) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let a = element(field, alpha)?;
    let e = order_divisor(&ctx, e)?;
    let free = ctx.is_e_free(a, &e)?;
    print(json!({
        "alpha": a,
        "e": e.value().to_string(),
        "e_free": free,
        "primitive": ctx.is_primitive(a),
        "log": ctx.field().log(a),
    }))
}

pub fn normal(field: FieldSpec, beta: &str, g: Option<&str>) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let b = element(field, beta)?;
    let g_free = match g {
        Some(g) => Some(ctx.is_g_free(b, &parse_poly(g, &field.base_sizes())?)?),
        None => None,
    };
    print(json!({
        "beta": b,
        "normal": ctx.is_normal(b),
        "g_free": g_free,
        "additive_order": format_poly(&ctx.additive_order(b)),
    }))
}

pub fn count_pn(field: FieldSpec) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    print(json!({ "q": ctx.q(), "n": ctx.n(), "N": ctx.count_primitive_normal() }))
}

pub fn upsilon_check(field: FieldSpec, f: &str, m: Caps, base_coefficients: bool) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let f = rational(&ctx, field, f, m)?;
    let domain = if base_coefficients { CoefficientDomain::BaseField } else { CoefficientDomain::TopField };
    let v = in_upsilon(&f, ctx.field(), domain)?;
    print(json!({
        "f": f.to_text(),
        "member": v.member,
        "witness": v.witness.map(|(t, a)| json!([format_poly(&t), a])),
        "reason": v.reason,
    }))
}

pub fn rho_kappa_verify(field: FieldSpec) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let cc = CharContext::new(&ctx)?;
    let f = ctx.field();
    let mut checks = 0u64;
    let mut mismatches = 0u64;
    let mut max_err = 0f64;
    for s in ctx.factored_order().divisors()? {
        let fs = ctx.factored_order().restrict(&s)?;
        for a in 1..f.size() as u32 {
            let z = cc.rho(a, &fs)?;
            let want = ctx.is_e_free(a, &fs)? as u8;
            max_err = max_err.max((z - want as f64).norm());
            checks += 1;
            if round_indicator(z).ok() != Some(want) {
                mismatches += 1;
            }
        }
    }
    for g in monic_divisors(ctx.xn1(), 1 << 14)? {
        for b in f.elements() {
            let z = cc.kappa(b, &g)?;
            let want = ctx.is_g_free_factored(b, &g) as u8;
            max_err = max_err.max((z - want as f64).norm());
            checks += 1;
            if round_indicator(z).ok() != Some(want) {
                mismatches += 1;
            }
        }
    }
    print(json!({ "checks": checks, "mismatches": mismatches, "max_error": max_err, "ok": mismatches == 0 }))
}

pub fn weil_verify(field: FieldSpec, instances: usize, seed: u64, max_degree: usize) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let cc = CharContext::new(&ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut worst = 0f64;
    for i in 0..instances {
        let inst = cc.random_instance(&mut rng, max_degree, i % 2 == 1)?;
        let r = cc.weil_check(&inst.v, inst.u.as_ref(), &inst.chi, &inst.psi)?;
        if r.rhs > 0.0 {
            worst = worst.max(r.lhs / r.rhs);
        }
        if !r.holds {
            violations.push(json!({ "instance": inst, "report": r }));
        }
    }
    let failed = violations.len();
    print(json!({
        "instances": instances,
        "violations": failed,
        "worst_ratio": worst,
        "details": violations,
    }))?;
    if failed > 0 {
        return Err(CliError::Usage(format!("{failed} instances violate the bound")));
    }
    Ok(Outcome::Done)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Characters,
    Both,
}

#[allow(clippy::too_many_arguments)]
pub fn nf_count(
    field: FieldSpec,
    f: &str,
    m: Caps,
    e1: Option<u64>,
    e2: Option<u64>,
    g: &str,
    method: Method,
) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let f = rational(&ctx, field, f, m)?;
    let e1 = order_divisor(&ctx, e1)?;
    let e2 = order_divisor(&ctx, e2)?;
    let g = xn1_divisor(&ctx, field, g)?;
    let mut out = json!({ "f": f.to_text(), "e1": e1.value().to_string(), "e2": e2.value().to_string() });
    if method != Method::Characters {
        let r = count_nf_direct(&ctx, &f, &e1, &e2, &g, DEFAULT_WITNESSES)?;
        out["direct"] = json!(r.n_f);
        out["witnesses"] = json!(r.witnesses);
        out["g"] = json!(r.g);
    }
    if method != Method::Direct {
        let cc = CharContext::new(&ctx)?;
        out["characters"] = json!(cc.n_f_by_characters(&f, &e1, &e2, &g)?);
    }
    print(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    /// Corollary, gcd-210 sieves, 𝔑 rules, exhaustive search.
    Default,
    /// A_8-bounded corollary, then the gcd-210 sieves.
    Bounded,
    /// Only the exhaustive search.
    Exhaustive,
}

/// `--ell`/`--g` select a single sieve; otherwise a named strategy.
pub fn strategy(
    name: StrategyName,
    ell: Option<&str>,
    g: Option<&str>,
    unproven_yesbb: bool,
) -> Result<Vec<Rule>, CliError> {
    if ell.is_some() || g.is_some() {
        let ell: EllSpec = ell.unwrap_or("gcd210").parse()?;
        let g: GSpec = g.unwrap_or("one").parse()?;
        return Ok(vec![Rule::Sieve { ell, g }]);
    }
    let mut rules = match name {
        StrategyName::Default => default_strategy(),
        StrategyName::Bounded => bounded_strategy(),
        StrategyName::Exhaustive => vec![Rule::Exhaustive { cap: pnfree::search::DEFAULT_EXHAUSTIVE_CAP }],
    };
    for r in rules.iter_mut() {
        if let Rule::YesBb { allow_any_characteristic } = r {
            *allow_any_characteristic = unproven_yesbb;
        }
    }
    Ok(rules)
}

fn options(budget: Duration) -> ClassifyOptions {
    ClassifyOptions { budget, ..ClassifyOptions::default() }
}

fn outcome_of<'a>(rows: impl IntoIterator<Item = &'a PairClassification>) -> Outcome {
    if rows.into_iter().any(|c| c.status == Status::Indeterminate) {
        Outcome::Indeterminate
    } else {
        Outcome::Done
    }
}

pub fn certify(
    field: Option<FieldSpec>,
    m: Caps,
    strategy: &[Rule],
    replay: Option<&Path>,
    budget: Duration,
) -> Result<Outcome, CliError> {
    if let Some(path) = replay {
        let text = std::fs::read_to_string(path)?;
        let line = text.lines().find(|l| !l.trim().is_empty()).ok_or_else(|| CliError::Usage("empty report".into()))?;
        let c: PairClassification =
            serde_json::from_str(line).map_err(|e| CliError::Usage(format!("not a certify report: {e}")))?;
        let ok = certify::replay(&c, &options(budget))?;
        print(json!({ "q": c.q, "n": c.n, "status": c.status, "replayed": ok }))?;
        return if ok { Ok(Outcome::Done) } else { Err(CliError::Usage("replay produced a different verdict".into())) };
    }
    let field = field.ok_or_else(|| CliError::Usage("--field is required".into()))?;
    let c = certify::classify_pair(field.q(), field.n, m.m1, m.m2, strategy, &options(budget));
    let outcome = outcome_of([&c]);
    print(serde_json::to_value(&c).map_err(|e| CliError::Usage(e.to_string()))?)?;
    Ok(outcome)
}

/// Classifies pairs in parallel; rows come back sorted by (q, n).
pub fn classify_rows(
    pairs: &[(u64, u32)],
    m: Caps,
    strategy: &[Rule],
    budget: Duration,
    timings: bool,
) -> Vec<(PairClassification, u128)> {
    let opts = options(budget);
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
        .par_iter()
        .map(|&(q, n)| {
            let start = Instant::now();
            let c = certify::classify_pair(q, n, m.m1, m.m2, strategy, &opts);
            (c, if timings { start.elapsed().as_millis() } else { 0 })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn scan(
    q: &str,
    n: &str,
    m: Caps,
    strategy: &[Rule],
    out: Option<&Path>,
    csv: Option<&Path>,
    timings: bool,
    budget: Duration,
) -> Result<Outcome, CliError> {
    let qs: Vec<u64> = parse_range(q)?.into_iter().filter(|&q| pnfree::ntheory::prime_power(q).is_some()).collect();
    let ns: Vec<u32> = parse_range(n)?.into_iter().map(|n| n as u32).collect();
    let pairs: Vec<(u64, u32)> = qs.iter().flat_map(|&q| ns.iter().map(move |&n| (q, n))).collect();
    let rows = classify_rows(&pairs, m, strategy, budget, timings);
    write_rows(&rows, out, csv, |c, ms| {
        let mut v = serde_json::to_value(c).unwrap();
        v["millis"] = json!(ms);
        v
    })?;
    Ok(outcome_of(rows.iter().map(|(c, _)| c)))
}

/// JSONL (always) and CSV (when asked) for classification rows.
pub fn write_rows(
    rows: &[(PairClassification, u128)],
    out: Option<&Path>,
    csv: Option<&Path>,
    mut to_json: impl FnMut(&PairClassification, u128) -> Value,
) -> Result<(), CliError> {
    let mut w = Jsonl::open(out)?;
    for (c, ms) in rows {
        w.emit(&to_json(c, *ms))?;
    }
    w.finish()?;
    if let Some(path) = csv {
        let mut cw = csv_writer(path)?;
        for (c, ms) in rows {
            cw.write_record(certify::report::csv_record(c, *ms))?;
        }
        cw.flush()?;
    }
    Ok(())
}

pub fn parse_regime(s: &str) -> Result<Regime, CliError> {
    Ok(match s {
        "generic" => Regime::Generic,
        "q2" => Regime::LenstraQ2,
        "q3" => Regime::LenstraQ3,
        "q4" => Regime::LenstraQ4,
        "q5" => Regime::lenstra_q5(),
        "wq34" => Regime::WqCap34,
        _ => match s.strip_prefix("custom:").map(parse_list::<f64>) {
            Some(Ok(v)) if v.len() == 2 => Regime::Custom { a: v[0], b: v[1] },
            _ => return Err(CliError::Usage(format!("unknown regime {s:?}"))),
        },
    })
}

pub fn threshold(t: &str, n: Option<&str>, q: Option<&str>, m: Caps, regime: &str) -> Result<Outcome, CliError> {
    let ts: Vec<f64> = parse_list(t)?;
    let regime = parse_regime(regime)?;
    let mut out = Jsonl::open(None)?;
    let pair_up = |len: usize| -> Vec<(usize, usize)> {
        if len == ts.len() {
            (0..len).map(|i| (i, i)).collect()
        } else {
            (0..ts.len()).flat_map(|i| (0..len).map(move |j| (i, j))).collect()
        }
    };
    match (n, q) {
        (Some(n), None) => {
            let ns: Vec<u32> = parse_list(n)?;
            for (i, j) in pair_up(ns.len()) {
                let v = certify::threshold_q(ns[j], m.m1, m.m2, ts[i], regime)?;
                out.emit(&json!({ "t": ts[i], "n": ns[j], "q_threshold": v }))?;
            }
        }
        (None, Some(q)) => {
            let qs: Vec<u64> = parse_list(q)?;
            for (i, j) in pair_up(qs.len()) {
                let v = certify::threshold_n(qs[j], m.m1, m.m2, ts[i], regime)?;
                out.emit(&json!({ "t": ts[i], "q": qs[j], "n_threshold": v, "n_min": v.ceil() as u64 }))?;
            }
        }
        _ => return Err(CliError::Usage("give exactly one of --n or --q".into())),
    }
    out.finish()?;
    Ok(Outcome::Done)
}

pub fn counterexample(field: FieldSpec, f: Option<&str>, m: Caps) -> Result<Outcome, CliError> {
    let ctx = context(field)?;
    let f = match f {
        Some(text) => rational(&ctx, field, text, m)?,
        None => known_counterexample(&ctx)?
            .ok_or_else(|| CliError::Usage("no built-in function for this field; pass --f".into()))?,
    };
    let r = verify_counterexample(&ctx, &f);
    print(json!({
        "q": ctx.q(),
        "n": ctx.n(),
        "f": f.to_text(),
        "confirmed": r.confirmed,
        "surviving_alphas": r.surviving_alphas,
    }))
}
