//! Primality testing.
//!
//! Below 3.3·10^24 Miller-Rabin with the first thirteen prime bases is a proof
//! of primality. Above it we run BPSW plus 40 extra Miller-Rabin rounds with
//! bases drawn from a fixed-seed generator and report a probable prime.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mont::Mont;

/// Bound below which the 13-base Miller-Rabin test is deterministic
/// (ψ_13 = 3317044064679887385961981).
pub const DETERMINISTIC_MR_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_MR_ROUNDS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    ProbablePrime,
}

impl Primality {
    pub fn is_prime_like(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

fn small_check(n: u128) -> Option<bool> {
    if n < 2 {
        return Some(false);
    }
    for &p in &MR_BASES {
        let p = p as u128;
        if n == p {
            return Some(true);
        }
        if n.is_multiple_of(p) {
            return Some(false);
        }
    }
    if n < 41 * 41 {
        return Some(true);
    }
    None
}

fn mr_round_mont(m: &Mont, n: u128, d: u128, s: u32, base: u128) -> bool {
    let one = m.one();
    let minus_one = m.sub(0, one);
    let mut x = m.pow(m.to_mont(base), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    let _ = n;
    false
}

/// Deterministic primality for `n < 2^127` below the MR bound; falls back to
/// the big-integer path otherwise.
pub fn is_prime_u128(n: u128) -> bool {
    classify_u128(n).is_prime_like()
}

pub fn classify_u128(n: u128) -> Primality {
    if let Some(b) = small_check(n) {
        return if b { Primality::Prime } else { Primality::Composite };
    }
    if n >= DETERMINISTIC_MR_BOUND || n >= (1u128 << 127) {
        return classify(&BigUint::from(n));
    }
    let m = Mont::new(n);
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    for &a in &MR_BASES {
        if !mr_round_mont(&m, n, d, s, a as u128) {
            return Primality::Composite;
        }
    }
    Primality::Prime
}

fn mr_round_big(n: &BigUint, d: &BigUint, s: u32, base: &BigUint) -> bool {
    let one = BigUint::one();
    let minus_one = n - 1u32;
    let mut x = base.modpow(d, n);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Primality verdict for an arbitrary-precision integer.
pub fn classify(n: &BigUint) -> Primality {
    if n.bits() <= 126 {
        let v = n.to_u128().unwrap();
        if v < DETERMINISTIC_MR_BOUND {
            return classify_u128(v);
        }
    }
    if n.is_even() {
        return Primality::Composite;
    }
    for &p in super::primes::small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n_minus_1 >> s;
    if !mr_round_big(n, &d, s, &BigUint::from(2u32)) {
        return Primality::Composite;
    }
    if !strong_lucas(n) {
        return Primality::Composite;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let three = BigUint::from(3u32);
    let span = n - 4u32;
    for _ in 0..EXTRA_MR_ROUNDS {
        let a = random_below(&mut rng, &span) + &three;
        if !mr_round_big(n, &d, s, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    let bytes = (bound.bits() as usize).div_ceil(8) + 8;
    let mut buf = vec![0u8; bytes];
    rng.fill(&mut buf[..]);
    BigUint::from_bytes_le(&buf) % bound
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod8 == 3 || n_mod8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
pub fn strong_lucas(n: &BigUint) -> bool {
    if is_square(n) {
        return false;
    }
    let mut d_abs = 5i64;
    let d = loop {
        let d = BigInt::from(d_abs);
        match jacobi(&d, n) {
            -1 => break d,
            0 => {
                // gcd(D, n) > 1; composite unless n == |D|
                return BigUint::from(d_abs.unsigned_abs()) == *n;
            }
            _ => {}
        }
        d_abs = if d_abs > 0 { -(d_abs + 2) } else { -d_abs + 2 };
        if d_abs.abs() > 1_000_000 {
            return false;
        }
    };
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / BigInt::from(4);
    let modn = |x: BigInt| x.mod_floor(&n_int);
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x / BigInt::from(2)).mod_floor(&n_int)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = modn(q.clone());
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = modn(&u * &v);
        v = modn(&v * &v - &qk * BigInt::from(2));
        qk = modn(&qk * &qk);
        if k.bit(i) {
            let u2 = half(&p * &u + &v);
            let v2 = half(&d * &u + &p * &v);
            u = u2;
            v = v2;
            qk = modn(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&v * &v - &qk * BigInt::from(2));
        qk = modn(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let primes: Vec<u128> = (0..200u128).filter(|&n| is_prime_u128(n)).collect();
        let oracle: Vec<u128> = crate::ntheory::primes::sieve(199).into_iter().map(u128::from).collect();
        assert_eq!(primes, oracle);
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to base 2, Carmichael numbers
        for n in [2047u128, 3277, 4033, 4681, 8321, 561, 1105, 1729, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u128(n), "{n}");
        }
        // psi_12: strong pseudoprime to the first 12 prime bases
        assert!(!is_prime_u128(318_665_857_834_031_151_167_461));
    }

    #[test]
    fn large_known_primes() {
        assert_eq!(classify_u128(2_147_483_647), Primality::Prime);
        assert_eq!(classify_u128((1u128 << 61) - 1), Primality::Prime);
        // 2^89 - 1 is prime and above the deterministic bound
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert_eq!(classify(&m89), Primality::ProbablePrime);
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(classify(&m127), Primality::ProbablePrime);
        let c = &m89 * BigUint::from(2_147_483_647u64);
        assert_eq!(classify(&c), Primality::Composite);
    }

    #[test]
    fn lucas_alone_on_small_primes_and_composites() {
        for n in (5u32..3000).step_by(2) {
            let big = BigUint::from(n);
            let prime = crate::ntheory::primes::is_prime_u64(n as u64);
            if prime {
                assert!(strong_lucas(&big), "{n} prime but rejected");
            }
        }
        // strong Lucas pseudoprimes (A217255) pass Lucas but fail base-2 MR
        for n in [5459u32, 5777, 10877, 16109, 18971] {
            assert!(strong_lucas(&BigUint::from(n)));
            assert!(!is_prime_u128(n as u128));
        }
    }

    #[test]
    fn jacobi_values() {
        let j = |a: i64, n: u32| jacobi(&BigInt::from(a), &BigUint::from(n));
        assert_eq!(j(1, 3), 1);
        assert_eq!(j(2, 3), -1);
        assert_eq!(j(5, 21), 1);
        assert_eq!(j(-7, 15), 1);
        assert_eq!(j(-1, 7), -1);
        assert_eq!(j(3, 9), 0);
    }
}
