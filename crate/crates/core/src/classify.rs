//! Deciding when `AGL_1` of a finite PIR contains a cross-commuting
//! nonabelian square, and building one from the CRT idempotents when it does.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::affine::{verify_square, AffineMap, SquareVerdict};
use crate::crt::{crt_decompose, factorize, is_prime_power, CrtDecomposition, PrimePowerFactor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReasonCode {
    /// A single local factor.
    PrimePower,
    /// One factor `F_2` next to a single larger factor.
    TwiceOddPrimePower,
    /// At least two factors larger than `F_2`; a square exists.
    TwoBigFactors,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationVerdict {
    /// Order of the ring, i.e. the product of the factors.
    pub n: u64,
    pub exists: bool,
    pub reason: ReasonCode,
    pub factors: Vec<PrimePowerFactor>,
    /// Factors with `q > 2`, in input order.
    pub big_factors: Vec<PrimePowerFactor>,
    /// Indices into `factors` of the first two big factors.
    pub chosen_indices: Option<(usize, usize)>,
}

/// Classifies `Z/q_1 × ... × Z/q_t` from its local factors.
pub fn classify_pir(factors: &[PrimePowerFactor]) -> Result<ClassificationVerdict> {
    let mut seen = BTreeSet::new();
    let mut n: u64 = 1;
    for f in factors {
        if PrimePowerFactor::new(f.p, f.e).ok() != Some(*f) {
            return Err(Error::NotPrimePower(f.q));
        }
        if !seen.insert(f.p) {
            return Err(Error::RepeatedPrime(f.p));
        }
        n = n.checked_mul(f.q).ok_or(Error::Overflow)?;
    }
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }

    let big: Vec<usize> = (0..factors.len()).filter(|&k| factors[k].q > 2).collect();
    let exists = big.len() >= 2;
    let reason = if exists {
        ReasonCode::TwoBigFactors
    } else if factors.len() == 1 {
        ReasonCode::PrimePower
    } else {
        ReasonCode::TwiceOddPrimePower
    };
    Ok(ClassificationVerdict {
        n,
        exists,
        reason,
        factors: factors.to_vec(),
        big_factors: big.iter().map(|&k| factors[k]).collect(),
        chosen_indices: exists.then(|| (big[0], big[1])),
    })
}

pub fn classify_zn(n: u64) -> Result<ClassificationVerdict> {
    classify_pir(&factorize(n)?)
}

/// The same decision phrased on `n` alone: neither a prime power nor twice an
/// odd prime power.
pub fn exists_by_shape(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let twice_odd_prime_power = n.is_multiple_of(2) && (n / 2) % 2 == 1 && is_prime_power(n / 2);
    Ok(!is_prime_power(n) && !twice_odd_prime_power)
}

pub fn local_has_noncommuting_pair(q: u64) -> Result<bool> {
    PrimePowerFactor::from_prime_power(q)?;
    Ok(q != 2)
}

/// The pair `(x -> x + 1, x -> a*x)` with `a = 2` for odd `p` and `a = q - 1`
/// for `p = 2`, both with `a - 1` nonzero so the pair fails to commute.
pub fn local_noncommuting_pair(q: u64) -> Result<(AffineMap, AffineMap)> {
    let factor = PrimePowerFactor::from_prime_power(q)?;
    if q == 2 {
        return Err(Error::NoPair(q));
    }
    let a = if factor.p == 2 { q - 1 } else { 2 };
    let r = factor.modulus();
    let pair = (AffineMap::with_modulus(r, 1, 1)?, AffineMap::with_modulus(r, a, 0)?);
    debug_assert!(!pair.0.commutes(&pair.1)?);
    Ok(pair)
}

/// Embeds a map on the `k`-th factor into `Z/nZ`, acting trivially elsewhere.
pub fn product_lift(map: &AffineMap, target: &CrtDecomposition, k: usize) -> Result<AffineMap> {
    let factor = target
        .factors
        .get(k)
        .ok_or(Error::IndexOutOfRange { index: k, len: target.len() })?;
    if map.modulus().get() != factor.q {
        return Err(Error::ModulusMismatch { left: map.modulus().get(), right: factor.q });
    }
    let n = target.modulus;
    let idem = target.idempotents[k];
    // a e_k + (1 - e_k): a on factor k, 1 on the others
    let a = n.add(n.mul(map.a(), idem), n.sub(1, idem));
    let b = n.mul(map.b(), idem);
    AffineMap::with_modulus(n, a, b)
}

/// Lifts two families onto distinct factors `i` and `j`, so that the lifted
/// families commute across while keeping their own commutation relations.
pub fn product_family_lift(
    family_a: &[AffineMap],
    i: usize,
    family_b: &[AffineMap],
    j: usize,
    target: &CrtDecomposition,
) -> Result<(Vec<AffineMap>, Vec<AffineMap>)> {
    if i == j {
        return Err(Error::SameFactor(i));
    }
    let lift_all = |fam: &[AffineMap], k: usize| -> Result<Vec<AffineMap>> {
        fam.iter().map(|f| product_lift(f, target, k)).collect()
    };
    Ok((lift_all(family_a, i)?, lift_all(family_b, j)?))
}

/// A verified square together with the local factors carrying each
/// noncommuting pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SquareWitness {
    pub f0: AffineMap,
    pub f1: AffineMap,
    pub g0: AffineMap,
    pub g1: AffineMap,
    pub factor_f: PrimePowerFactor,
    pub factor_g: PrimePowerFactor,
    pub verdict: SquareVerdict,
}

impl SquareWitness {
    pub fn maps(&self) -> [AffineMap; 4] {
        [self.f0, self.f1, self.g0, self.g1]
    }
}

/// Builds the square over `Z/nZ` from the two smallest factors with `q > 2`:
/// the smaller carries the F pair, the other the G pair.
pub fn construct_square(n: u64) -> Result<SquareWitness> {
    let verdict = classify_zn(n)?;
    if !verdict.exists {
        return Err(Error::NoSquare(Box::new(verdict)));
    }
    let crt = crt_decompose(n)?;
    let mut big: Vec<usize> = (0..crt.len()).filter(|&k| crt.factors[k].q > 2).collect();
    big.sort_by_key(|&k| crt.factors[k].q);
    let (kf, kg) = (big[0], big[1]);

    let (a0, a1) = local_noncommuting_pair(crt.factors[kf].q)?;
    let (b0, b1) = local_noncommuting_pair(crt.factors[kg].q)?;
    let (fs, gs) = product_family_lift(&[a0, a1], kf, &[b0, b1], kg, &crt)?;
    let square = verify_square(&fs[0], &fs[1], &gs[0], &gs[1])?;
    assert!(square.is_square, "CRT construction failed to verify for n = {n}");
    Ok(SquareWitness {
        f0: fs[0],
        f1: fs[1],
        g0: gs[0],
        g1: gs[1],
        factor_f: crt.factors[kf],
        factor_g: crt.factors[kg],
        verdict: square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64, a: u64, b: u64) -> AffineMap {
        AffineMap::new(n, a, b).unwrap()
    }

    fn ppf(q: u64) -> PrimePowerFactor {
        PrimePowerFactor::from_prime_power(q).unwrap()
    }

    #[test]
    fn local_pair_examples() {
        assert!(!local_has_noncommuting_pair(2).unwrap());
        assert!(local_has_noncommuting_pair(3).unwrap());
        assert!(local_has_noncommuting_pair(4).unwrap());
        assert_eq!(local_has_noncommuting_pair(12), Err(Error::NotPrimePower(12)));

        assert_eq!(local_noncommuting_pair(3).unwrap(), (m(3, 1, 1), m(3, 2, 0)));
        assert_eq!(local_noncommuting_pair(4).unwrap(), (m(4, 1, 1), m(4, 3, 0)));
        assert_eq!(local_noncommuting_pair(256).unwrap(), (m(256, 1, 1), m(256, 255, 0)));
        assert_eq!(local_noncommuting_pair(2), Err(Error::NoPair(2)));
    }

    #[test]
    fn classify_pir_examples() {
        let v = classify_pir(&[ppf(9), ppf(2)]).unwrap();
        assert!(!v.exists);
        assert_eq!(v.reason, ReasonCode::TwiceOddPrimePower);
        assert_eq!(v.n, 18);

        let v = classify_pir(&[ppf(3), ppf(4)]).unwrap();
        assert!(v.exists);
        assert_eq!(v.chosen_indices, Some((0, 1)));

        let v = classify_pir(&[ppf(2)]).unwrap();
        assert!(!v.exists);
        assert_eq!(v.reason, ReasonCode::PrimePower);

        assert_eq!(classify_pir(&[ppf(3), ppf(9)]), Err(Error::RepeatedPrime(3)));
        assert_eq!(classify_pir(&[]), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn classify_zn_examples() {
        let v = classify_zn(12).unwrap();
        assert!(v.exists);
        assert_eq!(v.reason, ReasonCode::TwoBigFactors);
        assert_eq!(v.big_factors.iter().map(|f| f.q).collect::<Vec<_>>(), vec![4, 3]);

        let v = classify_zn(8).unwrap();
        assert_eq!((v.exists, v.reason), (false, ReasonCode::PrimePower));
        let v = classify_zn(6).unwrap();
        assert_eq!((v.exists, v.reason), (false, ReasonCode::TwiceOddPrimePower));
        let v = classify_zn(2).unwrap();
        assert_eq!((v.exists, v.reason), (false, ReasonCode::PrimePower));
        assert_eq!(classify_zn(1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn smallest_modulus_with_a_square_is_12() {
        let first = (2..100).find(|&n| classify_zn(n).unwrap().exists);
        assert_eq!(first, Some(12));
    }

    #[test]
    fn shape_condition_matches_classification() {
        for n in 2..=10_000u64 {
            assert_eq!(exists_by_shape(n).unwrap(), classify_zn(n).unwrap().exists, "n = {n}");
        }
    }

    #[test]
    fn product_lift_examples() {
        let crt = crt_decompose(12).unwrap();
        // factor order is [4, 3]
        assert_eq!(product_lift(&m(3, 2, 0), &crt, 1).unwrap(), m(12, 5, 0));
        assert_eq!(product_lift(&m(3, 1, 1), &crt, 1).unwrap(), m(12, 1, 4));
        assert!(product_lift(&m(3, 1, 0), &crt, 1).unwrap().is_identity());
        assert!(product_lift(&m(4, 1, 0), &crt, 0).unwrap().is_identity());
        assert!(matches!(product_lift(&m(3, 1, 0), &crt, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(product_lift(&m(3, 1, 0), &crt, 0), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn lift_acts_trivially_off_its_factor() {
        let crt = crt_decompose(60).unwrap();
        let lifted = product_lift(&m(5, 3, 2), &crt, 2).unwrap();
        let parts = crt.split(&lifted).unwrap();
        assert!(parts[0].is_identity() && parts[1].is_identity());
        assert_eq!(parts[2], m(5, 3, 2));
    }

    #[test]
    fn construct_reproduces_worked_examples() {
        let w = construct_square(12).unwrap();
        assert_eq!(w.maps(), [m(12, 1, 4), m(12, 5, 0), m(12, 1, 9), m(12, 7, 0)]);
        assert_eq!((w.factor_f.q, w.factor_g.q), (3, 4));

        let w = construct_square(768).unwrap();
        assert_eq!(w.maps(), [m(768, 1, 256), m(768, 257, 0), m(768, 1, 513), m(768, 511, 0)]);
        assert_eq!((w.factor_f.q, w.factor_g.q), (3, 256));

        match construct_square(9) {
            Err(Error::NoSquare(v)) => assert_eq!(v.reason, ReasonCode::PrimePower),
            other => panic!("expected NoSquare, got {other:?}"),
        }
    }

    #[test]
    fn witness_projections_are_trivial_on_the_other_factor() {
        for n in [12u64, 15, 20, 45, 60, 105, 768, 1001] {
            let w = construct_square(n).unwrap();
            assert!(w.verdict.is_square);
            for f in [w.f0, w.f1] {
                assert!(f.project(w.factor_g.q).unwrap().is_identity());
            }
            for g in [w.g0, w.g1] {
                assert!(g.project(w.factor_f.q).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn family_lift_examples() {
        let crt = crt_decompose(12).unwrap();
        let a = [m(3, 1, 1), m(3, 2, 0)];
        let b = [m(4, 1, 1), m(4, 3, 0)];
        let (la, lb) = product_family_lift(&a, 1, &b, 0, &crt).unwrap();
        for x in &la {
            for y in &lb {
                assert!(x.commutes(y).unwrap());
            }
        }
        assert!(!la[0].commutes(&la[1]).unwrap());
        assert!(!lb[0].commutes(&lb[1]).unwrap());

        let (la, _) = product_family_lift(&[m(3, 2, 1), m(3, 2, 1)], 1, &[m(4, 3, 0)], 0, &crt).unwrap();
        assert!(la[0].commutes(&la[1]).unwrap());

        assert_eq!(product_family_lift(&a, 1, &a, 1, &crt), Err(Error::SameFactor(1)));
    }
}
