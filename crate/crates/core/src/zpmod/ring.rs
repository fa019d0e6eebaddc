use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The coefficient ring Z/p^s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RingRepr", into = "RingRepr")]
pub struct RingSpec {
    p: u64,
    s: u32,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct RingRepr {
    p: u64,
    s: u32,
}

impl TryFrom<RingRepr> for RingSpec {
    type Error = Error;
    fn try_from(r: RingRepr) -> Result<Self> {
        RingSpec::new(r.p, r.s)
    }
}

impl From<RingSpec> for RingRepr {
    fn from(r: RingSpec) -> Self {
        RingRepr { p: r.p, s: r.s }
    }
}

impl RingSpec {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if s == 0 {
            return Err(Error::invalid("ring exponent s must be at least 1"));
        }
        let modulus = p
            .checked_pow(s)
            .filter(|m| *m <= 1 << 62)
            .ok_or_else(|| Error::invalid(format!("{p}^{s} does not fit the 62-bit coefficient range")))?;
        Ok(RingSpec { p, s, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// p^s.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p^e for e ≤ s.
    pub fn pow_p(&self, e: u32) -> u64 {
        debug_assert!(e <= self.s);
        self.p.pow(e)
    }

    /// The quotient ring Z/p^u for u ≤ s.
    pub fn reduce_to(&self, u: u32) -> Result<RingSpec> {
        if u == 0 || u > self.s {
            return Err(Error::InvalidExponent {
                exponent: u,
                max: self.s,
            });
        }
        RingSpec::new(self.p, u)
    }

    pub fn check_exponent(&self, t: u32) -> Result<()> {
        if t == 0 || t > self.s {
            Err(Error::InvalidExponent {
                exponent: t,
                max: self.s,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn norm(&self, a: u64) -> u64 {
        a % self.modulus
    }

    #[inline]
    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus;
        let r = a + b;
        if r >= m {
            r - m
        } else {
            r
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// p-adic valuation of a residue; zero has valuation s.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.s;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, (a % self.modulus) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.modulus as i128) as u64)
    }

    /// Splits a nonzero residue as p^v · u with u a unit; returns (v, u).
    /// The unit is only determined modulo p^(s-v); the representative returned
    /// is a / p^v.
    pub fn split_unit(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        if v == self.s {
            return (v, 0);
        }
        (v, (a % self.modulus) / self.pow_p(v))
    }

    /// (-1)^e as a residue.
    #[inline]
    pub fn sign(&self, negative: bool) -> u64 {
        if negative {
            self.modulus - 1
        } else {
            1
        }
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.s)
    }
}
