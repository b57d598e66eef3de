use std::str::FromStr;
use std::time::Duration;

use pnfree::ntheory::prime_power;

use crate::error::CliError;

/// Environment variable holding the default factoring budget in milliseconds.
pub const BUDGET_ENV: &str = "PNFREE_BUDGET_MS";

/// `p^k,n` (or `q,n` with q a prime power).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub n: u32,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }

    /// Coefficient sizes of F_{q^n} from the top down to F_p.
    pub fn top_sizes(&self) -> Vec<u64> {
        let mut v = vec![self.q().pow(self.n)];
        if self.n > 1 && self.k > 1 {
            v.push(self.q());
        }
        if v.last() != Some(&(self.p as u64)) {
            v.push(self.p as u64);
        }
        v
    }

    /// Coefficient sizes of F_q down to F_p.
    pub fn base_sizes(&self) -> Vec<u64> {
        if self.k > 1 {
            vec![self.q(), self.p as u64]
        } else {
            vec![self.p as u64]
        }
    }
}

impl FromStr for FieldSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("field spec {s:?} is not of the form p^k,n"));
        let (left, n) = s.split_once(',').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        let (p, k) = match left.split_once('^') {
            Some((p, k)) => (p.trim().parse::<u64>().map_err(|_| bad())?, k.trim().parse::<u32>().map_err(|_| bad())?),
            None => {
                let q: u64 = left.trim().parse().map_err(|_| bad())?;
                prime_power(q).ok_or_else(|| CliError::Usage(format!("{q} is not a prime power")))?
            }
        };
        if n == 0 || k == 0 || prime_power(p) != Some((p, 1)) {
            return Err(CliError::Usage(format!("field spec {s:?}: p must be prime and k, n positive")));
        }
        Ok(FieldSpec { p: p as u32, k, n })
    }
}

/// `m1,m2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub m1: usize,
    pub m2: usize,
}

impl FromStr for Caps {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let v: Vec<usize> = parse_list(s)?;
        match v[..] {
            [m1, m2] => Ok(Caps { m1, m2 }),
            _ => Err(CliError::Usage(format!("degree caps {s:?} must be m1,m2"))),
        }
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad list item {x:?} in {s:?}"))))
        .collect()
}

/// `a..b`, `a..=b` or a comma list.
pub fn parse_range(s: &str) -> Result<Vec<u64>, CliError> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad range {s:?}")));
    if let Some((a, b)) = s.split_once("..=") {
        return Ok((num(a)?..=num(b)?).collect());
    }
    if let Some((a, b)) = s.split_once("..") {
        return Ok((num(a)?..num(b)?).collect());
    }
    parse_list(s)
}

/// Explicit milliseconds, else the environment default, else the library default.
pub fn budget(ms: Option<u64>) -> Result<Duration, CliError> {
    if let Some(ms) = ms {
        return Ok(Duration::from_millis(ms));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Duration::from_millis)
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a number of milliseconds"))),
        Err(_) => Ok(pnfree::ntheory::DEFAULT_BUDGET),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs() {
        assert_eq!("2^3,4".parse::<FieldSpec>().unwrap(), FieldSpec { p: 2, k: 3, n: 4 });
        assert_eq!("9,2".parse::<FieldSpec>().unwrap(), FieldSpec { p: 3, k: 2, n: 2 });
        assert!("6,2".parse::<FieldSpec>().is_err());
        assert!("4^1,2".parse::<FieldSpec>().is_err());
        assert!("2^1".parse::<FieldSpec>().is_err());
        assert_eq!("2^2,3".parse::<FieldSpec>().unwrap().top_sizes(), vec![64, 4, 2]);
        assert_eq!("2^1,6".parse::<FieldSpec>().unwrap().top_sizes(), vec![64, 2]);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..6").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_range("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_range("6,9").unwrap(), vec![6, 9]);
        assert!("3".parse::<Caps>().is_err());
    }
}
