//! Prime sieves: a cached table of primes up to 10^6 and a segmented
//! iterator for larger limits.

use std::sync::OnceLock;

/// Upper limit of the trial-division table.
pub const TRIAL_LIMIT: u32 = 1_000_000;

static SMALL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();

/// Primes `<= 10^6`, computed once.
pub fn small_primes() -> &'static [u32] {
    SMALL_PRIMES.get_or_init(|| sieve(TRIAL_LIMIT as usize))
}

/// Sieve of Eratosthenes returning every prime `<= limit`.
pub fn sieve(limit: usize) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Calls `f` on every prime `p < limit` in increasing order.
///
/// Segmented, so limits up to ~2^32 run in bounded memory.
pub fn for_each_prime_below(limit: u64, mut f: impl FnMut(u64)) {
    if limit <= 2 {
        return;
    }
    if limit <= TRIAL_LIMIT as u64 {
        for &p in small_primes() {
            if (p as u64) >= limit {
                break;
            }
            f(p as u64);
        }
        return;
    }
    let root = (limit as f64).sqrt() as u64 + 2;
    let base = sieve(root as usize);
    for &p in &base {
        if (p as u64) < limit {
            f(p as u64);
        }
    }
    const SEGMENT: u64 = 1 << 18;
    let mut lo = root + 1;
    let mut marks = vec![false; SEGMENT as usize];
    while lo < limit {
        let hi = (lo + SEGMENT).min(limit);
        marks[..(hi - lo) as usize].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            let p = p as u64;
            if p * p >= hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j < hi {
                marks[(j - lo) as usize] = true;
                j += p;
            }
        }
        for (i, &m) in marks[..(hi - lo) as usize].iter().enumerate() {
            if !m {
                f(lo + i as u64);
            }
        }
        lo = hi;
    }
}

/// Deterministic primality for machine words (trial division then Miller-Rabin).
pub fn is_prime_u64(n: u64) -> bool {
    super::primality::is_prime_u128(n as u128)
}

/// Returns `(p, k)` when `q = p^k` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    for &p in small_primes() {
        let p = p as u64;
        if p * p > q {
            break;
        }
        if q.is_multiple_of(p) {
            let mut k = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                k += 1;
            }
            return if r == 1 { Some((p, k)) } else { None };
        }
    }
    // no factor below min(sqrt q, 10^6): q is prime, or q > 10^12 with large factors
    if is_prime_u64(q) {
        return Some((q, 1));
    }
    for k in 2..64u32 {
        let r = (q as f64).powf(1.0 / k as f64).round() as u64;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand >= 2 && cand.checked_pow(k) == Some(q) && is_prime_u64(cand) {
                return Some((cand, k));
            }
        }
        if r < 2 {
            break;
        }
    }
    None
}

/// Prime powers in `[lo, hi]`, sorted.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 {
        return out;
    }
    for_each_prime_below(hi + 1, |p| {
        let mut x = p;
        loop {
            if x >= lo {
                out.push(x);
            }
            match x.checked_mul(p) {
                Some(y) if y <= hi => x = y,
                _ => break,
            }
        }
    });
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(sieve(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(small_primes().len(), 78_498);
    }

    #[test]
    fn segmented_matches_plain() {
        let limit = 2_500_000u64;
        let mut seg = Vec::new();
        for_each_prime_below(limit, |p| seg.push(p as u32));
        let plain = sieve(limit as usize - 1);
        assert_eq!(seg, plain);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(1_000_003u64 * 1_000_003), Some((1_000_003, 2)));
        assert_eq!(prime_powers_in(2, 16), vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }
}
