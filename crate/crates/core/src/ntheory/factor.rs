//! Integer factorization: trial division, primality, Brent's rho, ECM.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ecm::ecm_split;
use super::mont::Mont;
use super::primality::{classify, Primality};
use super::primes::small_primes;
use crate::error::{Error, Result};

/// Default time budget for one factorization (or one cyclotomic piece).
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certainty {
    Proven,
    ProbablePrimeParts,
    Incomplete,
}

impl Certainty {
    fn combine(self, other: Certainty) -> Certainty {
        use Certainty::*;
        match (self, other) {
            (Incomplete, _) | (_, Incomplete) => Incomplete,
            (ProbablePrimeParts, _) | (_, ProbablePrimeParts) => ProbablePrimeParts,
            _ => Proven,
        }
    }
}

/// A positive integer with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
    certainty: Certainty,
    cofactor: Option<BigUint>,
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.cofactor.is_none() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        if let Some(c) = &self.cofactor {
            parts.push(format!("({c})"));
        }
        write!(f, "{}", parts.join(" * "))
    }
}

impl FactoredInteger {
    /// Builds from an explicit prime map. Callers vouch for primality.
    pub fn from_factors(factors: BTreeMap<BigUint, u32>, certainty: Certainty) -> Self {
        let mut value = BigUint::one();
        for (p, e) in &factors {
            value *= p.pow(*e);
        }
        FactoredInteger {
            value,
            factors: factors.into_iter().filter(|(_, e)| *e > 0).collect(),
            certainty,
            cofactor: None,
        }
    }

    pub fn one() -> Self {
        FactoredInteger { value: BigUint::one(), factors: Vec::new(), certainty: Certainty::Proven, cofactor: None }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn certainty(&self) -> Certainty {
        self.certainty
    }

    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.certainty != Certainty::Incomplete
    }

    fn require_complete(&self) -> Result<()> {
        match &self.cofactor {
            Some(c) => Err(Error::Incomplete { cofactor: c.clone() }),
            None => Ok(()),
        }
    }

    /// Distinct primes, increasing.
    pub fn primes(&self) -> Result<Vec<BigUint>> {
        self.require_complete()?;
        Ok(self.factors.iter().map(|(p, _)| p.clone()).collect())
    }

    pub fn euler_phi(&self) -> Result<BigUint> {
        self.require_complete()?;
        let mut phi = BigUint::one();
        for (p, e) in &self.factors {
            phi *= p.pow(e - 1) * (p - 1u32);
        }
        Ok(phi)
    }

    pub fn moebius(&self) -> Result<i32> {
        self.require_complete()?;
        if self.factors.iter().any(|(_, e)| *e > 1) {
            return Ok(0);
        }
        Ok(if self.factors.len().is_multiple_of(2) { 1 } else { -1 })
    }

    pub fn omega(&self) -> Result<usize> {
        self.require_complete()?;
        Ok(self.factors.len())
    }

    /// Number of square-free divisors, `2^ω`.
    pub fn w(&self) -> Result<BigUint> {
        Ok(BigUint::one() << self.omega()?)
    }

    /// φ(value)/value.
    pub fn theta(&self) -> Result<BigRational> {
        let phi = self.euler_phi()?;
        Ok(BigRational::new(phi.into(), self.value.clone().into()))
    }

    /// All square-free divisors, sorted. Fails above 2^20 divisors.
    pub fn squarefree_divisors(&self) -> Result<Vec<BigUint>> {
        let omega = self.omega()?;
        if omega > 20 {
            return Err(Error::cap("square-free divisors", 1u128 << omega, 1 << 20));
        }
        let mut out = vec![BigUint::one()];
        for (p, _) in &self.factors {
            let extra: Vec<BigUint> = out.iter().map(|d| d * p).collect();
            out.extend(extra);
        }
        out.sort();
        Ok(out)
    }

    /// All divisors, sorted. Fails above 2^20 divisors.
    pub fn divisors(&self) -> Result<Vec<BigUint>> {
        self.require_complete()?;
        let count: u128 = self.factors.iter().map(|(_, e)| *e as u128 + 1).product();
        if count > 1 << 20 {
            return Err(Error::cap("divisors", count, 1 << 20));
        }
        let mut out = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut extra = Vec::new();
            for d in &out {
                let mut x = d.clone();
                for _ in 0..*e {
                    x *= p;
                    extra.push(x.clone());
                }
            }
            out.extend(extra);
        }
        out.sort();
        Ok(out)
    }

    /// Factorization of a divisor `d` of this value, read off the known primes.
    pub fn restrict(&self, d: &BigUint) -> Result<FactoredInteger> {
        self.require_complete()?;
        if d.is_zero() || !(&self.value % d).is_zero() {
            return Err(Error::invalid(format!("{d} does not divide {}", self.value)));
        }
        let mut rem = d.clone();
        let mut map = BTreeMap::new();
        for (p, _) in &self.factors {
            let mut e = 0;
            while (&rem % p).is_zero() {
                rem /= p;
                e += 1;
            }
            if e > 0 {
                map.insert(p.clone(), e);
            }
        }
        debug_assert!(rem.is_one());
        Ok(FactoredInteger::from_factors(map, self.certainty))
    }

    /// Merge the factorization of a coprime-or-not second factor: result is the product.
    pub fn multiply(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        for (p, e) in &other.factors {
            *map.entry(p.clone()).or_insert(0) += e;
        }
        let cofactor = match (&self.cofactor, &other.cofactor) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a * b),
        };
        let mut out = FactoredInteger::from_factors(map, self.certainty.combine(other.certainty));
        if let Some(c) = cofactor {
            out.value *= &c;
            out.cofactor = Some(c);
            out.certainty = Certainty::Incomplete;
        }
        out
    }
}

/// Factor a machine integer without time limit.
pub fn factor_u64(n: u64) -> Result<FactoredInteger> {
    factor_integer(&BigUint::from(n), Duration::from_secs(3600))
}

/// Full factorization within `budget`; on timeout the unfactored part is
/// kept as a cofactor and the certainty is `Incomplete`.
pub fn factor_integer(n: &BigUint, budget: Duration) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor 0"));
    }
    let deadline = Instant::now() + budget;
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    let rem = trial_divide(n, &mut map);
    let mut certainty = Certainty::Proven;
    let mut stack = Vec::new();
    if !rem.is_one() {
        stack.push((rem, 1u32));
    }
    let mut leftover = BigUint::one();
    while let Some((m, mult)) = stack.pop() {
        match classify(&m) {
            Primality::Prime => {
                *map.entry(m).or_insert(0) += mult;
                continue;
            }
            Primality::ProbablePrime => {
                certainty = certainty.combine(Certainty::ProbablePrimeParts);
                *map.entry(m).or_insert(0) += mult;
                continue;
            }
            Primality::Composite => {}
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, mult * k));
            continue;
        }
        match split(&m, deadline) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => leftover *= m.pow(mult),
        }
    }
    let mut out = FactoredInteger::from_factors(map, certainty);
    if !leftover.is_one() {
        out.value *= &leftover;
        out.cofactor = Some(leftover);
        out.certainty = Certainty::Incomplete;
    }
    debug_assert_eq!(&out.value, n);
    Ok(out)
}

fn trial_divide(n: &BigUint, map: &mut BTreeMap<BigUint, u32>) -> BigUint {
    let mut rem = n.clone();
    if let Some(mut r) = rem.to_u128() {
        for &p in small_primes() {
            let p64 = p as u64;
            if (p64 as u128) * (p64 as u128) > r {
                break;
            }
            if mod_small(r, p64) == 0 {
                let mut e = 0;
                while mod_small(r, p64) == 0 {
                    r /= p64 as u128;
                    e += 1;
                }
                map.insert(BigUint::from(p), e);
            }
        }
        if r > 1 && r < (super::primes::TRIAL_LIMIT as u128).pow(2) {
            // no factor up to sqrt(r): r is prime
            *map.entry(BigUint::from(r)).or_insert(0) += 1;
            return BigUint::one();
        }
        return BigUint::from(r);
    }
    for &p in small_primes() {
        if (&rem % p).is_zero() {
            let mut e = 0;
            while (&rem % p).is_zero() {
                rem /= p;
                e += 1;
            }
            map.insert(BigUint::from(p), e);
        }
        if let Some(r) = rem.to_u128() {
            let mut sub = BTreeMap::new();
            let r = trial_divide(&BigUint::from(r), &mut sub);
            for (k, v) in sub {
                *map.entry(k).or_insert(0) += v;
            }
            return r;
        }
    }
    rem
}

/// `r mod p` for `p < 2^32` using only 64-bit divisions.
#[inline]
fn mod_small(r: u128, p: u64) -> u64 {
    let hi = (r >> 64) as u64;
    let lo = r as u64;
    let two64 = ((1u128 << 64) % p as u128) as u64;
    (((hi % p) * two64 % p) + lo % p) % p
}

/// `(root, k)` with `m = root^k`, `k > 1` maximal among checked exponents.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    // every prime factor exceeds 10^6 > 2^19 at this point
    let max_k = (m.bits() / 19).max(2) as u32;
    for k in (2..=max_k).rev() {
        let r = m.nth_root(k);
        if &r.pow(k) == m {
            return Some((r, k));
        }
    }
    None
}

fn split(m: &BigUint, deadline: Instant) -> Option<BigUint> {
    if m.is_even() {
        return Some(BigUint::from(2u32));
    }
    // rho finds small factors quickly; larger ones are left to ECM
    let rho_deadline = deadline.min(Instant::now() + RHO_SLICE);
    let small = m.to_u128().filter(|&v| v < (1u128 << 127));
    for c in 1u64.. {
        if Instant::now() >= rho_deadline {
            break;
        }
        let d = match small {
            Some(v) => brent_u128(v, c as u128, rho_deadline).map(BigUint::from),
            None => brent_big(m, &BigUint::from(c), rho_deadline),
        };
        if let Some(d) = d.filter(|d| !d.is_one() && d != m) {
            return Some(d);
        }
    }
    ecm_split(m, deadline)
}

const RHO_SLICE: Duration = Duration::from_millis(300);

const BATCH: u64 = 128;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's cycle-finding rho with `f(x) = x^2 + c`, `x0 = 2`.
fn brent_u128(n: u128, c: u128, deadline: Instant) -> Option<u128> {
    let m = Mont::new(n);
    let cm = m.to_mont(c);
    let f = |y: u128| m.add(m.mul(y, y), cm);
    let mut y = m.to_mont(2);
    let mut x = y;
    let mut ys = y;
    let mut g = 1u128;
    let mut r = 1u64;
    let mut q = m.one();
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = m.mul(q, m.sub(x, y));
            }
            g = gcd_u128(q, n);
            k += BATCH;
        }
        r *= 2;
        if g == 1 && Instant::now() >= deadline {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(m.sub(x, ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn brent_big(n: &BigUint, c: &BigUint, deadline: Instant) -> Option<BigUint> {
    let f = |y: &BigUint| (y * y + c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut q = BigUint::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if g.is_one() && Instant::now() >= deadline {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    fn pairs(f: &FactoredInteger) -> Vec<(String, u32)> {
        f.factors().iter().map(|(p, e)| (p.to_string(), *e)).collect()
    }

    #[test]
    fn small_examples() {
        assert!(factor_u64(1).unwrap().factors().is_empty());
        assert_eq!(pairs(&factor_u64(63).unwrap()), vec![("3".into(), 2), ("7".into(), 1)]);
        let f = factor_u64(2047).unwrap();
        assert_eq!(pairs(&f), vec![("23".into(), 1), ("89".into(), 1)]);
        assert_eq!(f.euler_phi().unwrap(), BigUint::from(1936u32));
        assert_eq!(factor_u64(63).unwrap().w().unwrap(), BigUint::from(4u32));
        let one = factor_u64(1).unwrap();
        assert_eq!(one.w().unwrap(), BigUint::one());
        assert_eq!(one.euler_phi().unwrap(), BigUint::one());
        assert_eq!(one.moebius().unwrap(), 1);
        assert!(factor_integer(&BigUint::zero(), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn mersenne_155() {
        let n = (BigUint::one() << 155u32) - 1u32;
        let f = factor_integer(&n, DEFAULT_BUDGET).unwrap();
        assert_eq!(f.certainty(), Certainty::Proven);
        let want = [
            ("31", 2),
            ("311", 1),
            ("11471", 1),
            ("73471", 1),
            ("2147483647", 1),
            ("4649919401", 1),
            ("18158209813151", 1),
        ];
        let want: Vec<(String, u32)> = want.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        assert_eq!(pairs(&f), want);
    }

    #[test]
    fn large_semiprime_and_powers() {
        // two primes just above 2^40
        let p = big("1099511627791");
        let q = big("1099511627803");
        let f = factor_integer(&(&p * &q), DEFAULT_BUDGET).unwrap();
        assert_eq!(f.factors(), &[(p.clone(), 1), (q.clone(), 1)]);
        let f = factor_integer(&(&p * &p * &p), DEFAULT_BUDGET).unwrap();
        assert_eq!(f.factors(), &[(p.clone(), 3)]);
        // beyond 2^127: p * q * (2^89 - 1)
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let f = factor_integer(&(&p * &q * &m89), DEFAULT_BUDGET).unwrap();
        assert_eq!(f.certainty(), Certainty::ProbablePrimeParts);
        assert_eq!(f.factors().len(), 3);
    }

    #[test]
    fn budget_exhaustion_is_incomplete() {
        // product of two ~2^70 primes: rho needs ~2^35 steps
        let p = (BigUint::one() << 89u32) - 1u32;
        let q = (BigUint::one() << 107u32) - 1u32;
        let f = factor_integer(&(&p * &q), Duration::from_millis(50)).unwrap();
        assert_eq!(f.certainty(), Certainty::Incomplete);
        assert_eq!(f.cofactor(), Some(&(&p * &q)));
        assert!(f.w().is_err());
    }

    #[test]
    fn divisor_helpers() {
        let f = factor_u64(360).unwrap();
        assert_eq!(f.divisors().unwrap().len(), 24);
        let sq: Vec<u32> = f.squarefree_divisors().unwrap().iter().map(|d| d.to_u32().unwrap()).collect();
        assert_eq!(sq, vec![1, 2, 3, 5, 6, 10, 15, 30]);
        let r = f.restrict(&BigUint::from(12u32)).unwrap();
        assert_eq!(pairs(&r), vec![("2".into(), 2), ("3".into(), 1)]);
        assert_eq!(f.theta().unwrap(), BigRational::new(96.into(), 360.into()));
        assert_eq!(factor_u64(30).unwrap().moebius().unwrap(), -1);
        assert_eq!(factor_u64(12).unwrap().moebius().unwrap(), 0);
    }
}
