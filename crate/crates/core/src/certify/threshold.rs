//! Closed-form thresholds for q^{n/2} ≥ C·A²·q^{2n/t}·W, with W bounded by
//! 2^{a·n + b} depending on the regime.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{a_t_bound, prime_power};

/// Upper bound used for W_q(x^n − 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// W_q ≤ 2^n.
    Generic,
    /// W_2 ≤ 2^{n/4 + 5/4}.
    LenstraQ2,
    /// W_3 ≤ 2^{n/3 + 4/3}.
    LenstraQ3,
    /// W_4 ≤ 2^{n/3 + 2}.
    LenstraQ4,
    /// W_q ≤ 2^{3n/4}.
    WqCap34,
    /// W_q ≤ 2^{a·n + b}.
    Custom { a: f64, b: f64 },
}

impl Regime {
    /// (a, b) with W_q ≤ 2^{a·n + b}.
    pub fn exponents(self) -> (f64, f64) {
        match self {
            Regime::Generic => (1.0, 0.0),
            Regime::LenstraQ2 => (0.25, 1.25),
            Regime::LenstraQ3 => (1.0 / 3.0, 4.0 / 3.0),
            Regime::LenstraQ4 => (1.0 / 3.0, 2.0),
            Regime::WqCap34 => (0.75, 0.0),
            Regime::Custom { a, b } => (a, b),
        }
    }

    /// The bound W_5(x^n − 1) ≤ 2^{n/3 + 6}.
    pub fn lenstra_q5() -> Regime {
        Regime::Custom { a: 1.0 / 3.0, b: 6.0 }
    }
}

// relative slack added to every threshold so borderline cases stay on the safe side
const UPWARD: f64 = 1e-12;

/// Smallest real q with q^{n/2} ≥ (m1+m2+1)·A_t²·q^{2n/t}·2^{a·n+b}.
pub fn threshold_q(n: u32, m1: usize, m2: usize, t: f64, regime: Regime) -> Result<f64> {
    let (a, b) = regime.exponents();
    let n = n as f64;
    let denom = n / 2.0 - 2.0 * n / t;
    if t.is_nan() || t <= 4.0 || denom <= 0.0 {
        return Err(Error::domain(format!("t = {t} outside the valid region t > 4")));
    }
    let c = (m1 + m2 + 1) as f64;
    let ln_a = a_t_bound(t, None).ln_value;
    let ln_q = ((c.ln() + 2.0 * ln_a) + (a * n + b) * LN_2) / denom;
    Ok(ln_q.exp() * (1.0 + UPWARD))
}

/// Smallest real n with q^{n/2} ≥ (m1+m2+1)·Ã_{t,p}²·q^{2n/t}·2^{a·n+b},
/// where Ã excludes the characteristic of q.
pub fn threshold_n(q: u64, m1: usize, m2: usize, t: f64, regime: Regime) -> Result<f64> {
    let (p, _) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
    let (a, b) = regime.exponents();
    let denom = (0.5 - 2.0 / t) * (q as f64).ln() - a * LN_2;
    if t.is_nan() || t <= 4.0 || denom <= 0.0 {
        return Err(Error::domain(format!("t = {t} outside the valid region for q = {q}")));
    }
    let c = (m1 + m2 + 1) as f64;
    let ln_a = a_t_bound(t, Some(p)).ln_value;
    Ok((c.ln() + 2.0 * ln_a + b * LN_2) / denom * (1.0 + UPWARD))
}

/// For n = 3, ℓ = q − 1, g = 1 and Δ ≤ `delta_cap`: the sieve holds once
/// q ≥ ((m1+m2+1)·Δ·A_t²)^{2t/(3t−4)}.
pub fn casen3_bound(m1: usize, m2: usize, t: f64, delta_cap: f64) -> Result<f64> {
    if t.is_nan() || t <= 4.0 / 3.0 {
        return Err(Error::domain(format!("t = {t} must exceed 4/3")));
    }
    let c = (m1 + m2 + 1) as f64 * delta_cap;
    let ln_a = a_t_bound(t, None).ln_value;
    Ok(((c.ln() + 2.0 * ln_a) * 2.0 * t / (3.0 * t - 4.0)).exp() * (1.0 + UPWARD))
}
