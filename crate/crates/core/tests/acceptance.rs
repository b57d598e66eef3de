//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the test fails if any criterion does.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pnfree::certify::{
    casen3_bound, classify_many, classify_pair, decide_no_bb, decide_yes_bb, sieve_condition, sieve_identity_check,
    theorem_bound, threshold_q, ClassifyOptions, EllSpec, GSpec, PairData, Regime, Rule, Status, DEFAULT_COUNT_CAP,
};
use pnfree::charsums::{round_indicator, CharContext};
use pnfree::ffpoly::xn1::monic_divisors;
use pnfree::ffpoly::{FactoredPoly, Poly};
use pnfree::freeness::{count_primitive_normal, FreenessContext};
use pnfree::ntheory::bounds::q2q1_divisors_ok;
use pnfree::ntheory::{prime_powers_in, FactoredInteger};
use pnfree::search::{count_nf_direct, known_counterexample, verify_counterexample};
use pnfree::upsilon::{in_upsilon, CoefficientDomain, RationalFn};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:?}, limit {limit:?}"))
}

fn counts() -> Check {
    let start = Instant::now();
    for (p, k, n, want) in [(2, 1, 3, 3), (2, 1, 4, 4), (2, 1, 5, 15), (2, 1, 7, 49), (2, 1, 11, 957), (2, 3, 3, 378)] {
        let got = count_primitive_normal(p, k, n).map_err(e)?;
        ensure(got == want, || format!("N({}, {n}) = {got}, expected {want}", p.pow(k)))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("six counts exact".into())
}

fn counterexamples() -> Check {
    let start = Instant::now();
    for (p, n) in [(2, 6), (3, 3), (3, 4)] {
        let ctx = FreenessContext::new(p, 1, n).map_err(e)?;
        let f = known_counterexample(&ctx).map_err(e)?.ok_or("no built-in function")?;
        let r = verify_counterexample(&ctx, &f);
        ensure(r.confirmed, || format!("({p},{n}): {} surviving", r.surviving_alphas.len()))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok("three functions confirmed".into())
}

fn decision_rules() -> Check {
    for (q, n) in [(2, 3), (2, 4)] {
        let c = decide_no_bb(q, n, 3, 2, DEFAULT_COUNT_CAP).map_err(e)?;
        ensure(c.is_some(), || format!("({q},{n}) not excluded"))?;
    }
    for (q, n) in [(2, 5), (2, 7), (2, 11), (8, 3)] {
        let c = decide_yes_bb(q, n, 3, 2, DEFAULT_COUNT_CAP, false).map_err(e)?;
        ensure(c.is_some(), || format!("({q},{n}) not included"))?;
    }
    Ok("2 excluded, 4 included".into())
}

fn fields_of_size(sizes: &[u64]) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for &s in sizes {
        for p in [2u32, 3, 5, 7] {
            let mut m = 0;
            let mut v = 1u64;
            while v < s {
                v *= p as u64;
                m += 1;
            }
            if v == s {
                for k in (1..=m).filter(|k| m % k == 0) {
                    out.push((p, k, m / k));
                }
            }
        }
    }
    out
}

fn indicators() -> Check {
    let mut worst = 0f64;
    let mut checks = 0u64;
    for (p, k, n) in fields_of_size(&[8, 9, 16, 27, 64]) {
        let ctx = FreenessContext::new(p, k, n).map_err(e)?;
        let cc = CharContext::new(&ctx).map_err(e)?;
        let elems: Vec<u32> = ctx.field().elements().collect();
        for s in ctx.factored_order().divisors().map_err(e)? {
            let fs = ctx.factored_order().restrict(&s).map_err(e)?;
            for &a in elems.iter().filter(|&&a| a != 0) {
                let z = cc.rho(a, &fs).map_err(e)?;
                let want = ctx.is_e_free(a, &fs).map_err(e)? as u8;
                worst = worst.max((z - want as f64).norm());
                checks += 1;
                ensure(round_indicator(z).ok() == Some(want), || format!("rho mismatch at {a}, s = {s}"))?;
            }
        }
        for g in monic_divisors(ctx.xn1(), 1 << 12).map_err(e)? {
            for &b in &elems {
                let z = cc.kappa(b, &g).map_err(e)?;
                let want = ctx.is_g_free_factored(b, &g) as u8;
                worst = worst.max((z - want as f64).norm());
                checks += 1;
                ensure(round_indicator(z).ok() == Some(want), || format!("kappa mismatch at {b}"))?;
            }
        }
    }
    ensure(worst < 1e-6, || format!("max deviation {worst:e}"))?;
    Ok(format!("{checks} values, max deviation {worst:.1e}"))
}

fn random_upsilon(ctx: &FreenessContext, rng: &mut ChaCha8Rng) -> RationalFn {
    let size = ctx.size();
    loop {
        let d1 = rng.gen_range(0..=3);
        let d2 = rng.gen_range(0..=2);
        let f1 = Poly::new((0..=d1).map(|_| rng.gen_range(0..size) as u32).collect());
        let mut c2: Vec<u32> = (0..=d2).map(|_| rng.gen_range(0..size) as u32).collect();
        c2[d2] = 1;
        let Ok(f) = RationalFn::new(ctx.field(), f1, Poly::new(c2), 3, 2) else { continue };
        if in_upsilon(&f, ctx.field(), CoefficientDomain::TopField).map(|v| v.member).unwrap_or(false) {
            return f;
        }
    }
}

struct Instance {
    q: u64,
    n: u32,
    direct: u64,
    characters: f64,
    e1: FactoredInteger,
    e2: FactoredInteger,
    g: FactoredPoly,
}

fn expansion_instances() -> Result<Vec<Instance>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = Vec::new();
    for (p, k, n) in [(2, 2, 2), (3, 1, 3)] {
        let ctx = FreenessContext::new(p, k, n).map_err(e)?;
        let cc = CharContext::new(&ctx).map_err(e)?;
        let divisors = ctx.factored_order().divisors().map_err(e)?;
        let gs = monic_divisors(ctx.xn1(), 1 << 12).map_err(e)?;
        for i in 0..12 {
            let f = random_upsilon(&ctx, &mut rng);
            let e1 = ctx.factored_order().restrict(&divisors[rng.gen_range(0..divisors.len())]).map_err(e)?;
            let e2 = ctx.factored_order().restrict(&divisors[(i * 7) % divisors.len()]).map_err(e)?;
            let g = gs[i % gs.len()].clone();
            let direct = count_nf_direct(&ctx, &f, &e1, &e2, &g, 0).map_err(e)?.n_f;
            let characters = cc.n_f_by_characters(&f, &e1, &e2, &g).map_err(e)?;
            out.push(Instance { q: ctx.q(), n, direct, characters, e1, e2, g });
        }
    }
    Ok(out)
}

/// Larger fields with small e1, e2 and g, where the sufficient condition can hold.
fn positivity_instances() -> Result<Vec<Instance>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut out = Vec::new();
    for (p, k, n) in [(2, 1, 6), (2, 2, 4)] {
        let ctx = FreenessContext::new(p, k, n).map_err(e)?;
        let divisors = ctx.factored_order().divisors().map_err(e)?;
        let gs = monic_divisors(ctx.xn1(), 1 << 12).map_err(e)?;
        for i in 0..6 {
            let f = random_upsilon(&ctx, &mut rng);
            let e1 = ctx.factored_order().restrict(&divisors[i % 3]).map_err(e)?;
            let e2 = ctx.factored_order().restrict(&divisors[(i / 3) % 2]).map_err(e)?;
            let g = gs[i % 2].clone();
            let direct = count_nf_direct(&ctx, &f, &e1, &e2, &g, 0).map_err(e)?.n_f;
            out.push(Instance { q: ctx.q(), n, direct, characters: f64::NAN, e1, e2, g });
        }
    }
    Ok(out)
}

fn expansion(inst: &[Instance]) -> Check {
    let worst = inst.iter().map(|i| (i.direct as f64 - i.characters).abs()).fold(0.0, f64::max);
    ensure(worst < 1e-4, || format!("max difference {worst:e}"))?;
    Ok(format!("{} instances, max difference {worst:.1e}", inst.len()))
}

fn lower_bound(inst: &[&Instance]) -> Check {
    let mut sufficient = 0;
    for i in inst {
        let b = theorem_bound(i.q, i.n, 3, 2, &i.e1, &i.e2, &i.g).map_err(e)?;
        ensure(i.direct as f64 >= b.lower_bound - 1e-9, || {
            format!("count {} below bound {}", i.direct, b.lower_bound)
        })?;
        if b.sufficient {
            sufficient += 1;
            ensure(i.direct > 0, || "sufficient condition but zero count".into())?;
        }
    }
    Ok(format!("{} instances, {sufficient} with the sufficient condition", inst.len()))
}

fn sieve_inequality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for (p, n, ells) in [(2u32, 6u32, [1u64, 3, 7, 9, 21, 63]), (3, 3, [1, 2, 13, 26, 2, 1])] {
        let ctx = FreenessContext::new(p, 1, n).map_err(e)?;
        let gs = monic_divisors(ctx.xn1(), 1 << 12).map_err(e)?;
        for (i, &l) in ells.iter().enumerate() {
            let ell = ctx.order_divisor(l).map_err(e)?;
            let g = gs[i % gs.len()].clone();
            let f = random_upsilon(&ctx, &mut rng);
            let r = sieve_identity_check(&ctx, &f, &ell, &g).map_err(e)?;
            ensure(r.holds, || format!("F_{}: {} < {} for ell = {l}", ctx.size(), r.lhs, r.rhs))?;
            total += 1;
        }
    }
    Ok(format!("{total} configurations"))
}

fn weil() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [(2, 1, 4), (3, 1, 3), (2, 2, 3), (5, 1, 3), (2, 1, 8), (2, 2, 5)];
    let mut ran = 0;
    let mut violations = 0;
    for (i, &(p, k, n)) in fields.iter().enumerate() {
        let ctx = FreenessContext::new(p, k, n).map_err(e)?;
        let cc = CharContext::new(&ctx).map_err(e)?;
        let share = if i + 1 == fields.len() { 1000 - ran } else { 1000 / fields.len() };
        for j in 0..share {
            let inst = cc.random_instance(&mut rng, 2, j % 2 == 1).map_err(e)?;
            let r = cc.weil_check(&inst.v, inst.u.as_ref(), &inst.chi, &inst.psi).map_err(e)?;
            if !r.holds {
                violations += 1;
            }
            ran += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{ran} instances, 0 violations"))
}

fn thresholds() -> Check {
    let start = Instant::now();
    for (t, n, want) in
        [(6.3, 3, 3.74e9), (6.3, 4, 3.91e7), (6.4, 5, 2.5e6), (6.5, 6, 394155.0), (6.7, 10, 9239.0), (9.0, 158, 23.0)]
    {
        let got = threshold_q(n, 3, 2, t, Regime::Generic).map_err(e)?;
        ensure((got - want).abs() / want < 0.01, || format!("t = {t}, n = {n}: {got}"))?;
    }
    let b = casen3_bound(3, 2, 3.7, 159.0).map_err(e)?;
    ensure(b.ceil() <= 22282.0, || format!("cubic bound {b}"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("six rows within 1%, cubic bound {}", b.ceil()))
}

fn scan_slice() -> Check {
    let start = Instant::now();
    let qs = prime_powers_in(9239, 20_000);
    let pairs: Vec<(u64, u32)> = qs.iter().flat_map(|&q| (6..=9).map(move |n| (q, n))).collect();
    let rules = [Rule::Sieve { ell: EllSpec::Gcd(210), g: GSpec::One }];
    let rows = classify_many(&pairs, 3, 2, &rules, &ClassifyOptions::default());
    let bad: Vec<(u64, u32)> = rows.iter().filter(|c| c.status != Status::ProvedInB).map(|c| (c.q, c.n)).collect();
    ensure(bad.is_empty(), || format!("{} pairs not proved, first {:?}", bad.len(), bad.first()))?;
    within(start, Duration::from_secs(1800))?;
    Ok(format!("{} pairs, zero unresolved", rows.len()))
}

fn exceptional_pairs() -> Check {
    let start = Instant::now();
    let one = GSpec::One;
    let linear = GSpec::Linear;
    for (q, n) in [(23, 22), (25, 24), (27, 26), (31, 30)] {
        let data = PairData::new(q, n, Duration::from_secs(30)).map_err(e)?;
        let a = sieve_condition(&data, 3, 2, &EllSpec::Gcd(210), &one).map_err(e)?;
        ensure(!a.holds, || format!("({q},{n}) already holds with g = 1"))?;
        let rules = [
            Rule::Sieve { ell: EllSpec::Gcd(210), g: one.clone() },
            Rule::Sieve { ell: EllSpec::Gcd(210), g: linear.clone() },
        ];
        let c = classify_pair(q, n, 3, 2, &rules, &ClassifyOptions::default());
        ensure(c.status == Status::ProvedInB && c.rule == Some(rules[1].clone()), || {
            format!("({q},{n}): {:?}", c.status)
        })?;
    }
    within(start, Duration::from_secs(600))?;
    Ok("four pairs need the linear factors".into())
}

/// Trial-division oracle for the q² + q + 1 property.
fn q2q1_oracle(q: u64) -> bool {
    let mut m = q * q + q + 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            if d != 3 && (d % 3 != 1 || (q - 1).is_multiple_of(d)) {
                return false;
            }
            m /= d;
        } else {
            d += 1;
        }
    }
    m == 1 || m == 3 || (m % 3 == 1 && !(q - 1).is_multiple_of(m))
}

fn q2q1_divisors() -> Check {
    let qs = prime_powers_in(2, 10_000);
    for &q in &qs {
        let lib = q2q1_divisors_ok(q).map_err(e)?;
        ensure(lib && q2q1_oracle(q), || format!("q = {q}: library {lib}, oracle {}", q2q1_oracle(q)))?;
    }
    Ok(format!("{} prime powers", qs.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

#[test]
fn acceptance() {
    let inst = expansion_instances();
    let extra = positivity_instances().expect("positivity instances");
    let criteria: Vec<Criterion> = vec![
        ("primitive normal counts", Box::new(counts)),
        ("counterexamples", Box::new(counterexamples)),
        ("decision rules", Box::new(decision_rules)),
        ("indicator identities", Box::new(indicators)),
        ("character expansion", Box::new(|| inst.as_ref().map_err(Clone::clone).and_then(|i| expansion(i)))),
        (
            "lower bound",
            Box::new(|| {
                let mut all = inst.as_ref().map_err(Clone::clone)?.iter().collect::<Vec<_>>();
                all.extend(extra.iter());
                lower_bound(&all)
            }),
        ),
        ("sieve inequality", Box::new(sieve_inequality)),
        ("weil bounds", Box::new(weil)),
        ("thresholds", Box::new(thresholds)),
        ("scan slice", Box::new(scan_slice)),
        ("exceptional pairs", Box::new(exceptional_pairs)),
        ("q^2+q+1 divisors", Box::new(q2q1_divisors)),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = check();
        let secs = start.elapsed().as_secs_f64();
        match &r {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
