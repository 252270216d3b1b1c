//! Residue arithmetic modulo a 64-bit modulus.
//!
//! Products go through `u128`, so any modulus that fits in a `u64` is safe.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Reduces a signed value into `[0, n)`.
    #[inline]
    pub fn reduce_signed(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, x: u64, y: u64) -> u64 {
        let (x, y) = (x % self.0, y % self.0);
        if x >= y {
            x - y
        } else {
            self.0 - (y - x)
        }
    }

    #[inline]
    pub fn neg(self, x: u64) -> u64 {
        self.sub(0, x)
    }

    #[inline]
    pub fn mul(self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_unit(self, x: u64) -> bool {
        gcd(x % self.0, self.0) == 1
    }

    /// Multiplicative inverse, or `None` when `x` is not a unit.
    pub fn inv(self, x: u64) -> Option<u64> {
        let (g, s, _) = ext_gcd(x % self.0, self.0);
        (g == 1).then(|| self.reduce_signed(s))
    }

    /// All units in `[0, n)`, ascending.
    pub fn units(self) -> impl Iterator<Item = u64> {
        (1..self.0).filter(move |&a| self.is_unit(a))
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        Modulus::new(n)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, s, t)` with `a*s + b*t = g = gcd(a, b)`.
pub fn ext_gcd(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 as u64, s0, t0)
}

/// Euler's totient by trial division.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
