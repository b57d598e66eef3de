//! Symbolic choices of ℓ | q^n − 1 and g | x^n − 1, resolved per pair.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::{factor, xn_shape, BaseField, Poly, XnShape};
use crate::ntheory::{cyclotomic_split, prime_power, FactoredInteger};

/// The data a pair needs before any rule can run.
#[derive(Debug, Clone)]
pub struct PairData {
    pub q: u64,
    pub n: u32,
    pub p: u64,
    pub order: FactoredInteger,
    pub shape: XnShape,
}

impl PairData {
    pub fn new(q: u64, n: u32, budget: Duration) -> Result<Self> {
        let (p, _) = prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        if n == 0 {
            return Err(Error::domain("n must be >= 1"));
        }
        let order = cyclotomic_split(q, n, budget)?;
        let shape = xn_shape(q, n as u64)?;
        Ok(PairData { q, n, p, order, shape })
    }

    pub fn qn(&self) -> BigUint {
        BigUint::from(self.q).pow(self.n)
    }
}

/// How ℓ is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllSpec {
    /// ℓ = q^n − 1.
    Full,
    /// ℓ = gcd(q^n − 1, m).
    Gcd(u64),
    /// ℓ = q − 1.
    BaseMinusOne,
    /// An explicit divisor.
    Value(u64),
}

/// How g is chosen, by the degrees of the distinct irreducible factors kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GSpec {
    One,
    /// Product of all linear factors of x^n − 1.
    Linear,
    /// Product of the irreducible factors of degree k with q^k ≤ 2n.
    SmallDegree,
    /// The radical of x^n − 1.
    Full,
    /// An explicit monic divisor over F_q, coefficients as codes.
    Explicit(Poly),
}

/// A resolved ℓ: its value and which primes of q^n − 1 it keeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedEll {
    pub value: BigUint,
    pub kept: Vec<BigUint>,
    pub sieved: Vec<BigUint>,
}

impl EllSpec {
    pub fn resolve(&self, data: &PairData) -> Result<ResolvedEll> {
        let m = data.order.value();
        let value = match self {
            EllSpec::Full => m.clone(),
            EllSpec::Gcd(k) => m.gcd(&BigUint::from(*k)),
            EllSpec::BaseMinusOne => BigUint::from(data.q - 1),
            EllSpec::Value(v) => {
                let v = BigUint::from(*v);
                if v.is_one() || (m % &v).to_u64() == Some(0) {
                    v
                } else {
                    return Err(Error::invalid(format!("ell = {v} does not divide q^n - 1")));
                }
            }
        };
        let (kept, sieved) = data.order.primes()?.into_iter().partition(|p| (&value % p).to_u64() == Some(0));
        Ok(ResolvedEll { value, kept, sieved })
    }
}

/// A resolved g: degrees of the distinct factors kept and of those sieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedG {
    pub kept: Vec<u64>,
    pub sieved: Vec<u64>,
}

impl GSpec {
    pub fn resolve(&self, data: &PairData) -> Result<ResolvedG> {
        let degrees: Vec<u64> = data.shape.factor_degrees().into_iter().map(|(d, _)| d).collect();
        let keep = |pred: &dyn Fn(u64) -> bool| {
            let (kept, sieved): (Vec<u64>, Vec<u64>) = degrees.iter().partition(|&&d| pred(d));
            ResolvedG { kept, sieved }
        };
        Ok(match self {
            GSpec::One => keep(&|_| false),
            GSpec::Full => keep(&|_| true),
            GSpec::Linear => keep(&|d| d == 1),
            GSpec::SmallDegree => {
                let cap = 2 * data.n as u128;
                keep(&|d| (data.q as u128).checked_pow(d as u32).is_some_and(|v| v <= cap))
            }
            GSpec::Explicit(g) => {
                let (p, k) = prime_power(data.q).unwrap();
                let base = BaseField::new(p as u32, k)?;
                let xn = Poly::xn_minus_one(&base, data.n as usize);
                if g.is_zero() || !g.is_monic() || !g.divides(&base, &xn) {
                    return Err(Error::invalid(format!("g = {g} is not a monic divisor of x^n - 1")));
                }
                let mut kept: Vec<u64> = factor(&base, g)?.factors.iter().map(|(f, _)| f.deg() as u64).collect();
                kept.sort_unstable();
                let mut sieved = degrees.clone();
                for d in &kept {
                    let i = sieved.iter().position(|x| x == d).expect("factor degree present in shape");
                    sieved.remove(i);
                }
                ResolvedG { kept, sieved }
            }
        })
    }
}

impl fmt::Display for EllSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllSpec::Full => write!(f, "full"),
            EllSpec::Gcd(m) => write!(f, "gcd{m}"),
            EllSpec::BaseMinusOne => write!(f, "q-1"),
            EllSpec::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for EllSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad ell spec {s:?}")));
        match s {
            "full" => Ok(EllSpec::Full),
            "q-1" => Ok(EllSpec::BaseMinusOne),
            _ if s.starts_with("gcd") => {
                let m = num(s.trim_start_matches("gcd").trim_start_matches([':', '(']).trim_end_matches(')'))?;
                if m == 0 {
                    return Err(Error::Parse("gcd modulus must be positive".into()));
                }
                Ok(EllSpec::Gcd(m))
            }
            _ => {
                let v = num(s)?;
                if v == 0 {
                    return Err(Error::Parse("ell must be positive".into()));
                }
                Ok(EllSpec::Value(v))
            }
        }
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::One => write!(f, "one"),
            GSpec::Linear => write!(f, "linear"),
            GSpec::SmallDegree => write!(f, "small-degree"),
            GSpec::Full => write!(f, "full"),
            GSpec::Explicit(g) => write!(f, "{g}"),
        }
    }
}

impl FromStr for GSpec {
    type Err = Error;

    /// `one`, `linear`, `small-degree`, `full`, or a coefficient list such as `[1,0,1]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "one" | "1" => Ok(GSpec::One),
            "linear" => Ok(GSpec::Linear),
            "small-degree" => Ok(GSpec::SmallDegree),
            "full" => Ok(GSpec::Full),
            t => {
                let coeffs: Vec<u32> =
                    serde_json::from_str(t).map_err(|_| Error::Parse(format!("bad g spec {t:?}")))?;
                Ok(GSpec::Explicit(Poly::new(coeffs)))
            }
        }
    }
}
