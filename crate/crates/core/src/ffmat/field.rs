use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A prime field `F_p` with `p < 2^31`.
///
/// Elements are plain `u32` residues in `[0, p)`. All arithmetic goes
/// through the field value so that a matrix never needs to carry more than
/// its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_MODULUS: u32 = 1 << 31;

    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p > Self::MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Number of elements as `u64`, handy for counting arguments.
    #[inline]
    pub fn order(self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn div(self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn large_modulus_mul_does_not_overflow() {
        let f = PrimeField::new(2147483647).unwrap();
        let a = f.p() - 1;
        assert_eq!(f.mul(a, a), 1);
        assert_eq!(f.add(a, a), f.p() - 2);
    }
}
