use std::sync::OnceLock;
use std::time::Duration;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use pnfree::certify::{
    classify_many, classify_pair, default_strategy, sieve_condition, threshold_q, ClassifyOptions, EllSpec, GSpec,
    PairClassification, PairData, Regime,
};
use pnfree::ffpoly::{factor, BaseField, Field, Poly};
use pnfree::freeness::FreenessContext;
use pnfree::ntheory::{a_t_bound, factor_u64, prime_power};

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn phi_oracle(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

fn mu_oracle(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Contexts shared by the field properties: F_64 over F_4 and F_81 over F_3.
fn contexts() -> &'static [FreenessContext] {
    static CTX: OnceLock<Vec<FreenessContext>> = OnceLock::new();
    CTX.get_or_init(|| vec![FreenessContext::new(2, 2, 3).unwrap(), FreenessContext::new(3, 1, 4).unwrap()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factors_reassemble(n in 1u64..(1 << 40)) {
        let f = factor_u64(n).unwrap();
        let mut acc = BigUint::from(1u32);
        for (p, e) in f.factors() {
            let p64 = p.to_u64().unwrap();
            prop_assert!(trial_prime(p64), "{p64} is not prime");
            acc *= p.pow(*e);
        }
        prop_assert_eq!(acc, BigUint::from(n));
        prop_assert!(f.is_complete());
    }

    #[test]
    fn phi_and_mu_are_multiplicative(a in 1u64..400, b in 1u64..400) {
        prop_assume!(gcd(a, b) == 1);
        let fa = factor_u64(a).unwrap();
        let fb = factor_u64(b).unwrap();
        let fab = factor_u64(a * b).unwrap();
        prop_assert_eq!(fab.euler_phi().unwrap(), fa.euler_phi().unwrap() * fb.euler_phi().unwrap());
        prop_assert_eq!(fab.moebius().unwrap(), fa.moebius().unwrap() * fb.moebius().unwrap());
        prop_assert_eq!(fab.euler_phi().unwrap(), BigUint::from(phi_oracle(a * b)));
        prop_assert_eq!(fab.moebius().unwrap(), mu_oracle(a * b));
    }

    #[test]
    fn w_below_a_t_bound(n in 1u64..(1 << 40), t in 2.0f64..10.0) {
        let w = factor_u64(n).unwrap().w().unwrap().to_f64().unwrap();
        let a = a_t_bound(t, None);
        prop_assert!(w.ln() <= a.ln_value + (n as f64).ln() / t + 1e-9);
    }

    #[test]
    fn poly_factorization_reassembles(
        field in prop::sample::select(vec![(2u32, 1u32), (2, 2), (3, 1), (5, 1), (3, 2)]),
        coeffs in prop::collection::vec(0u32..25, 1..9),
    ) {
        let base = BaseField::new(field.0, field.1).unwrap();
        let q = base.q() as u32;
        let coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % q).collect();
        let g = Poly::new(coeffs);
        prop_assume!(!g.is_zero());
        let fp = factor(&base, &g).unwrap();
        prop_assert_eq!(fp.reassemble(&base), g.clone());
        for (p, _) in &fp.factors {
            prop_assert!(p.is_monic());
            if p.deg() <= 3 {
                // low degree: irreducible iff no root
                let roots = (0..q).filter(|&x| p.eval(&base, x) == 0).count();
                prop_assert!(p.deg() == 1 || roots == 0);
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(which in 0usize..2, a in 0u32..81, b in 0u32..81, i in 0u64..5) {
        let ctx = &contexts()[which];
        let f = ctx.field();
        let size = f.size() as u32;
        let (a, b) = (a % size, b % size);
        let fr = |x| f.frobenius_q(x, i);
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        // F_q is fixed
        let c = a % ctx.q() as u32;
        prop_assert_eq!(fr(c), c);
    }

    #[test]
    fn poly_action_is_linear(
        which in 0usize..2,
        coeffs in prop::collection::vec(0u32..4, 0..6),
        a in 0u32..81, b in 0u32..81, c in 0u32..4,
    ) {
        let ctx = &contexts()[which];
        let f = ctx.field();
        let size = f.size() as u32;
        let q = ctx.q() as u32;
        let (a, b, c) = (a % size, b % size, c % q);
        let h = Poly::new(coeffs.into_iter().map(|x| x % q).collect());
        let act = |x| f.poly_action(&h, x);
        prop_assert_eq!(act(f.add(a, b)), f.add(act(a), act(b)));
        prop_assert_eq!(act(f.mul(c, a)), f.mul(c, act(a)));
    }

    #[test]
    fn g_free_matches_search(which in 0usize..2, beta in 0u32..81, pick in 0usize..64) {
        let ctx = &contexts()[which];
        let beta = beta % ctx.size() as u32;
        let divisors = pnfree::ffpoly::xn1::monic_divisors(ctx.xn1(), 1 << 10).unwrap();
        let g = divisors[pick % divisors.len()].reassemble(ctx.base());
        prop_assert_eq!(ctx.is_g_free(beta, &g).unwrap(), ctx.is_g_free_by_search(beta, &g).unwrap());
    }

    #[test]
    fn threshold_is_tight_and_falls_with_n(n in 3u32..200, t in 6.0f64..12.0) {
        let q = threshold_q(n, 3, 2, t, Regime::Generic).unwrap();
        let lhs = |q: f64| n as f64 / 2.0 * q.ln();
        let rhs = |q: f64| 6f64.ln() + 2.0 * a_t_bound(t, None).ln_value + 2.0 * n as f64 / t * q.ln() + n as f64 * 2f64.ln();
        prop_assert!(lhs(q * 1.001) > rhs(q * 1.001));
        prop_assert!(lhs(q * 0.999) < rhs(q * 0.999));
        let next = threshold_q(n + 1, 3, 2, t, Regime::Generic).unwrap();
        prop_assert!(next <= q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn widening_ell_trades_delta_for_w(q in 23u64..400, n in 3u32..9) {
        prop_assume!(prime_power(q).is_some());
        let data = PairData::new(q, n, Duration::from_secs(10)).unwrap();
        let small = sieve_condition(&data, 3, 2, &EllSpec::Gcd(6), &GSpec::One).unwrap();
        let large = sieve_condition(&data, 3, 2, &EllSpec::Gcd(210), &GSpec::One).unwrap();
        let w = |s: &str| s.parse::<u64>().unwrap();
        prop_assert!(w(&large.W_ell) >= w(&small.W_ell));
        prop_assert!(large.delta >= small.delta);
        prop_assert!(large.r <= small.r);
        let lin = sieve_condition(&data, 3, 2, &EllSpec::Gcd(210), &GSpec::Linear).unwrap();
        prop_assert!(lin.delta >= large.delta);
        prop_assert!(lin.s <= large.s);
    }

    #[test]
    fn classification_is_deterministic(q in 2u64..60, n in 3u32..8) {
        prop_assume!(prime_power(q).is_some());
        let opts = ClassifyOptions::default();
        let a = classify_pair(q, n, 3, 2, &default_strategy(), &opts);
        let b = classify_pair(q, n, 3, 2, &default_strategy(), &opts);
        prop_assert_eq!(&a, &b);
        let json = serde_json::to_string(&a).unwrap();
        let back: PairClassification = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &a);
    }
}

#[test]
fn batch_order_does_not_matter() {
    let mut pairs: Vec<(u64, u32)> =
        [23u64, 25, 27, 29, 31, 32].iter().flat_map(|&q| (6..9).map(move |n| (q, n))).collect();
    let opts = ClassifyOptions::default();
    let a = classify_many(&pairs, 3, 2, &default_strategy(), &opts);
    pairs.reverse();
    pairs.extend_from_slice(&pairs.clone());
    let b = classify_many(&pairs, 3, 2, &default_strategy(), &opts);
    assert_eq!(a, b);
}

#[test]
fn field_axioms_small() {
    for ctx in contexts() {
        let f = ctx.field();
        for a in 1..f.size() as u32 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
