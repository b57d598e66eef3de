//! Montgomery arithmetic modulo an odd `n < 2^127`.

/// Full 128x128 -> 256 bit product as `(lo, hi)`.
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (lo, hi)
}

#[derive(Debug, Clone, Copy)]
pub struct Mont {
    n: u128,
    /// -n^{-1} mod 2^128
    neg_inv: u128,
    /// 2^256 mod n
    r2: u128,
    one: u128,
}

impl Mont {
    pub fn new(n: u128) -> Self {
        assert!(n & 1 == 1 && n > 1 && n < (1u128 << 127), "Montgomery modulus must be odd and < 2^127");
        // Newton iteration for n^{-1} mod 2^128
        let mut inv: u128 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let neg_inv = inv.wrapping_neg();
        let mut r = 1u128 % n;
        for _ in 0..256 {
            r <<= 1;
            if r >= n {
                r -= n;
            }
        }
        let mut m = Mont { n, neg_inv, r2: r, one: 0 };
        m.one = m.to_mont(1);
        m
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    fn redc(&self, lo: u128, hi: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mn_lo, mn_hi) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(mn_lo);
        let t = hi + mn_hi + carry as u128;
        if t >= self.n {
            t - self.n
        } else {
            t
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (lo, hi) = mul_wide(a, b);
        self.redc(lo, hi)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    pub fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(a, 0)
    }

    #[inline]
    pub fn one(&self) -> u128 {
        self.one
    }

    pub fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.one;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}
