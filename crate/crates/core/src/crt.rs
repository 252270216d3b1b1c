//! Prime-power factorization and the CRT splitting of `Z/nZ` by idempotents.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::modular::{is_prime, Modulus};

/// A prime power `q = p^e` with `e >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePowerFactor {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PrimePowerFactor {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) || e == 0 {
            return Err(Error::NotPrimePower(p.checked_pow(e).unwrap_or(0)));
        }
        let q = p.checked_pow(e).ok_or(Error::NotPrimePower(0))?;
        Ok(PrimePowerFactor { p, e, q })
    }

    /// Recognises `q` as `p^e`.
    pub fn from_prime_power(q: u64) -> Result<Self> {
        match factorize(q) {
            Ok(fs) if fs.len() == 1 => Ok(fs[0]),
            _ => Err(Error::NotPrimePower(q)),
        }
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.q).expect("prime power is at least 2")
    }
}

/// Trial-division factorization, factors ordered by ascending prime.
pub fn factorize(n: u64) -> Result<Vec<PrimePowerFactor>> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            let mut q = 1;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
                q *= p;
            }
            out.push(PrimePowerFactor { p, e, q });
        }
        p += 1;
    }
    if m > 1 {
        out.push(PrimePowerFactor { p: m, e: 1, q: m });
    }
    Ok(out)
}

pub fn is_prime_power(n: u64) -> bool {
    matches!(factorize(n), Ok(fs) if fs.len() == 1)
}

/// `Z/nZ ≅ ∏ Z/q_kZ` together with the idempotents `e_k` realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtDecomposition {
    pub modulus: Modulus,
    pub factors: Vec<PrimePowerFactor>,
    /// `idempotents[k] ≡ 1 (mod q_k)` and `≡ 0 (mod q_j)` for `j != k`.
    pub idempotents: Vec<u64>,
}

pub fn crt_decompose(n: u64) -> Result<CrtDecomposition> {
    let modulus = Modulus::new(n)?;
    let factors = factorize(n)?;
    let idempotents = factors
        .iter()
        .map(|f| {
            let cofactor = n / f.q;
            let inv = f.modulus().inv(cofactor % f.q).expect("cofactor is coprime to q");
            modulus.mul(cofactor, inv)
        })
        .collect();
    Ok(CrtDecomposition { modulus, factors, idempotents })
}

impl CrtDecomposition {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Recombines residues `r_k mod q_k` into the unique residue mod `n`.
    pub fn combine(&self, residues: &[u64]) -> u64 {
        debug_assert_eq!(residues.len(), self.factors.len());
        let n = self.modulus;
        residues
            .iter()
            .zip(&self.idempotents)
            .fold(0, |acc, (&r, &e)| n.add(acc, n.mul(r, e)))
    }

    /// Recombines one map per factor into the map on `Z/nZ` with those projections.
    pub fn reconstruct(&self, parts: &[AffineMap]) -> Result<AffineMap> {
        if parts.len() != self.factors.len() {
            return Err(Error::IndexOutOfRange { index: parts.len(), len: self.factors.len() });
        }
        for (part, factor) in parts.iter().zip(&self.factors) {
            if part.modulus().get() != factor.q {
                return Err(Error::ModulusMismatch { left: part.modulus().get(), right: factor.q });
            }
        }
        let a: Vec<u64> = parts.iter().map(AffineMap::a).collect();
        let b: Vec<u64> = parts.iter().map(AffineMap::b).collect();
        AffineMap::with_modulus(self.modulus, self.combine(&a), self.combine(&b))
    }

    /// Projections of `f` onto every factor, in factor order.
    pub fn split(&self, f: &AffineMap) -> Result<Vec<AffineMap>> {
        if f.modulus() != self.modulus {
            return Err(Error::ModulusMismatch { left: f.modulus().get(), right: self.modulus.get() });
        }
        self.factors.iter().map(|fac| f.project(fac.q)).collect()
    }
}
