//! The affine group `AGL_1(Z/nZ)`: maps `x -> a*x + b` with `a` a unit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{gcd, Modulus};

/// An affine permutation `x -> a*x + b` of `Z/nZ`.
///
/// Both coefficients are kept in `[0, n)` and `a` is always a unit, so two
/// maps are equal exactly when they act identically. Maps order by `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct AffineMap {
    n: Modulus,
    a: u64,
    b: u64,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    n: u64,
    a: u64,
    b: u64,
}

impl TryFrom<RawMap> for AffineMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        AffineMap::new(raw.n, raw.a, raw.b)
    }
}

impl From<AffineMap> for RawMap {
    fn from(f: AffineMap) -> RawMap {
        RawMap { n: f.n.get(), a: f.a, b: f.b }
    }
}

impl AffineMap {
    pub fn new(n: u64, a: u64, b: u64) -> Result<Self> {
        Self::with_modulus(Modulus::new(n)?, a, b)
    }

    pub fn with_modulus(n: Modulus, a: u64, b: u64) -> Result<Self> {
        let (a, b) = (n.reduce(a), n.reduce(b));
        if gcd(a, n.get()) != 1 {
            return Err(Error::NotAUnit { a, n: n.get() });
        }
        Ok(AffineMap { n, a, b })
    }

    /// Builds a map from signed coefficients, reducing them first.
    pub fn from_signed(n: Modulus, a: i128, b: i128) -> Result<Self> {
        Self::with_modulus(n, n.reduce_signed(a), n.reduce_signed(b))
    }

    pub fn identity(n: Modulus) -> Self {
        AffineMap { n, a: 1, b: 0 }
    }

    /// Parses the CLI token syntax `"a,b"`.
    pub fn parse_token(n: Modulus, token: &str) -> Result<Self> {
        let (a, b) = token
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"a,b\", got {token:?}")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<i128>()
                .map_err(|e| Error::Parse(format!("{s:?} in {token:?}: {e}")))
        };
        Self::from_signed(n, parse(a)?, parse(b)?)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    #[inline]
    pub fn a(&self) -> u64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> u64 {
        self.b
    }

    /// `a - 1`, the coefficient that appears in the commutation criterion.
    #[inline]
    pub fn s(&self) -> u64 {
        self.n.sub(self.a, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.n.add(self.n.mul(self.a, x), self.b)
    }

    fn check_same(&self, other: &AffineMap) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { left: self.n.get(), right: other.n.get() });
        }
        Ok(())
    }

    /// `self ∘ other`, i.e. apply `other` first: `(a,b)∘(c,d) = (ac, ad+b)`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        self.check_same(other)?;
        let n = self.n;
        Ok(AffineMap {
            n,
            a: n.mul(self.a, other.a),
            b: n.add(n.mul(self.a, other.b), self.b),
        })
    }

    pub fn invert(&self) -> AffineMap {
        let n = self.n;
        let a_inv = n.inv(self.a).expect("multiplier is a unit");
        AffineMap { n, a: a_inv, b: n.neg(n.mul(a_inv, self.b)) }
    }

    /// Commutation via `(a-1)d = (c-1)b`, without composing.
    pub fn commutes(&self, other: &AffineMap) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &AffineMap) -> bool {
        let n = self.n;
        n.mul(self.s(), other.b) == n.mul(other.s(), self.b)
    }

    /// Reduction onto the CRT component `Z/qZ`; `q` must be a unitary divisor of `n`.
    pub fn project(&self, q: u64) -> Result<AffineMap> {
        let n = self.n.get();
        if q < 2 || !n.is_multiple_of(q) || gcd(q, n / q) != 1 {
            return Err(Error::NotCoprimeDivisor { q, n });
        }
        let target = Modulus::new(q)?;
        Ok(AffineMap { n: target, a: self.a % q, b: self.b % q })
    }
}

impl PartialOrd for AffineMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.a, self.b).cmp(&(other.n, other.a, other.b))
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) mod {}", self.a, self.b, self.n)
    }
}

/// The commutation data of a candidate square `(F0, F1, G0, G1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SquareVerdict {
    /// `cross[i][j]` is true when `F_i` commutes with `G_j`.
    pub cross: [[bool; 2]; 2],
    pub f_noncommuting: bool,
    pub g_noncommuting: bool,
    pub is_square: bool,
}

/// Checks whether `(f0, f1, g0, g1)` is a cross-commuting nonabelian square.
pub fn verify_square(
    f0: &AffineMap,
    f1: &AffineMap,
    g0: &AffineMap,
    g1: &AffineMap,
) -> Result<SquareVerdict> {
    let fs = [f0, f1];
    let gs = [g0, g1];
    let mut cross = [[false; 2]; 2];
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            cross[i][j] = f.commutes(g)?;
        }
    }
    let f_noncommuting = !f0.commutes(f1)?;
    let g_noncommuting = !g0.commutes(g1)?;
    let is_square = cross.iter().flatten().all(|&c| c) && f_noncommuting && g_noncommuting;
    Ok(SquareVerdict { cross, f_noncommuting, g_noncommuting, is_square })
}
