//! Lenstra's elliptic curve method on Montgomery curves with Suyama's
//! parametrization, x-only arithmetic, and a baby-step giant-step stage 2.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::primes::sieve;

/// Projective x-coordinate (X : Z).
#[derive(Clone)]
struct Point {
    x: BigUint,
    z: BigUint,
}

struct Curve<'a> {
    n: &'a BigUint,
    /// (A + 2) / 4.
    a24: BigUint,
}

impl Curve<'_> {
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.n
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if &s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    fn double(&self, p: &Point) -> Point {
        let s = self.add(&p.x, &p.z);
        let d = self.sub(&p.x, &p.z);
        let t1 = self.mul(&s, &s);
        let t2 = self.mul(&d, &d);
        let t3 = self.sub(&t1, &t2);
        let x = self.mul(&t1, &t2);
        let z = self.mul(&t3, &self.add(&t2, &self.mul(&self.a24, &t3)));
        Point { x, z }
    }

    /// P + Q given P − Q.
    fn diff_add(&self, p: &Point, q: &Point, diff: &Point) -> Point {
        let u = self.mul(&self.sub(&p.x, &p.z), &self.add(&q.x, &q.z));
        let v = self.mul(&self.add(&p.x, &p.z), &self.sub(&q.x, &q.z));
        let s = self.add(&u, &v);
        let d = self.sub(&u, &v);
        Point { x: self.mul(&diff.z, &self.mul(&s, &s)), z: self.mul(&diff.x, &self.mul(&d, &d)) }
    }

    fn ladder(&self, p: &Point, k: u64) -> Point {
        if k == 0 {
            return Point { x: BigUint::zero(), z: BigUint::zero() };
        }
        let mut r0 = p.clone();
        let mut r1 = self.double(p);
        for i in (0..63 - k.leading_zeros()).rev() {
            if (k >> i) & 1 == 1 {
                r0 = self.diff_add(&r1, &r0, p);
                r1 = self.double(&r1);
            } else {
                r1 = self.diff_add(&r1, &r0, p);
                r0 = self.double(&r0);
            }
        }
        r0
    }
}

fn inverse(a: &BigUint, n: &BigUint) -> Result<BigUint, BigUint> {
    let ai = BigInt::from(a.clone());
    let ni = BigInt::from(n.clone());
    let e = ai.extended_gcd(&ni);
    if !e.gcd.is_one() {
        return Err(e.gcd.abs().to_biguint().unwrap_or_default());
    }
    let x = e.x.mod_floor(&ni);
    Ok(x.to_biguint().unwrap_or_default())
}

/// Outcome of one curve: a proper factor, or nothing.
fn nontrivial(g: BigUint, n: &BigUint) -> Option<BigUint> {
    (!g.is_one() && &g != n && !g.is_zero()).then_some(g)
}

/// Runs curves with σ = 6, 7, … and growing B1 until a factor appears or the
/// deadline passes. `n` must be odd, composite and not a perfect power.
pub(crate) fn ecm_split(n: &BigUint, deadline: Instant) -> Option<BigUint> {
    let primes = sieve(3_000_001);
    let mut sigma = 6u64;
    for (b1, curves) in
        [(2_000u64, 25), (11_000, 90), (50_000, 300), (250_000, 700), (1_000_000, 1800), (3_000_000, u32::MAX)]
    {
        for _ in 0..curves {
            if Instant::now() >= deadline {
                return None;
            }
            if let Some(d) = one_curve(n, sigma, b1, 100 * b1, &primes, deadline) {
                return Some(d);
            }
            sigma += 1;
        }
    }
    None
}

fn one_curve(n: &BigUint, sigma: u64, b1: u64, b2: u64, primes: &[u32], deadline: Instant) -> Option<BigUint> {
    let s = BigUint::from(sigma) % n;
    let sq = (&s * &s) % n;
    let five = BigUint::from(5u32) % n;
    let u = if sq >= five { sq - five } else { n - (five - sq) };
    let v = (BigUint::from(4u32) * &s) % n;
    let u3 = (&u * &u * &u) % n;
    let v3 = (&v * &v * &v) % n;
    let vmu = if v >= u { &v - &u } else { n - (&u - &v) };
    let num = (&vmu * &vmu * &vmu % n) * ((BigUint::from(3u32) * &u + &v) % n) % n;
    let den = (BigUint::from(16u32) * &u3 % n) * &v % n;
    let a24 = match inverse(&den, n) {
        Ok(inv) => num * inv % n,
        Err(g) => return nontrivial(g, n),
    };
    let curve = Curve { n, a24 };
    let mut q = Point { x: u3, z: v3 };

    for &p in primes.iter().take_while(|&&p| (p as u64) <= b1) {
        let p = p as u64;
        let mut pe = p;
        while pe <= b1 / p {
            pe *= p;
        }
        q = curve.ladder(&q, pe);
        if p % 4096 == 1 && Instant::now() >= deadline {
            return None;
        }
    }
    let g = q.z.gcd(n);
    if !g.is_one() {
        return nontrivial(g, n);
    }

    const W: u64 = 210;
    let baby: Vec<u64> = (1..W / 2).filter(|j| j.gcd(&W) == 1).collect();
    let mut table: Vec<Point> = Vec::with_capacity(baby.len());
    let q1 = q.clone();
    let q2 = curve.double(&q);
    let mut prev = q1.clone();
    let mut cur = curve.diff_add(&q2, &q1, &q1);
    let mut j = 1u64;
    table.push(q1.clone());
    while j + 2 < W / 2 {
        if baby.contains(&(j + 2)) {
            table.push(cur.clone());
        }
        let next = curve.diff_add(&cur, &q2, &prev);
        prev = cur;
        cur = next;
        j += 2;
    }
    let step = curve.ladder(&q, W);
    let m0 = (b1 / W).max(1);
    let mut r_prev = curve.ladder(&q, (m0 - 1) * W);
    let mut r = curve.ladder(&q, m0 * W);
    let mut acc = BigUint::one();
    let mut m = m0;
    while m * W <= b2 + W {
        for s in &table {
            let t = curve.sub(&curve.mul(&r.x, &s.z), &curve.mul(&s.x, &r.z));
            acc = curve.mul(&acc, &t);
        }
        let next = if m0 == 1 && m == 1 { curve.double(&r) } else { curve.diff_add(&r, &step, &r_prev) };
        r_prev = r;
        r = next;
        m += 1;
        if m.is_multiple_of(256) {
            if Instant::now() >= deadline {
                return None;
            }
            let g = acc.gcd(n);
            if !g.is_one() {
                return nontrivial(g, n);
            }
        }
    }
    nontrivial(acc.gcd(n), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn splits_two_large_primes() {
        let p: BigUint = "21180247636732981".parse().unwrap();
        let q: BigUint = "2047572230657338751575051".parse().unwrap();
        let n = &p * &q;
        let d = ecm_split(&n, Instant::now() + Duration::from_secs(60)).expect("factor found");
        assert!(d == p || d == q);
    }
}
