//! Test-only oracles, written independently of the library's algorithms.
#![allow(dead_code)]

use affsq::centralizer::{LocalRing, Mat2};
use affsq::AffineMap;

/// Every `(u, d)` in `(Z/q)^2` with `M (u, d)^T = 0`, by direct scan.
pub fn brute_kernel(m: &Mat2, ring: LocalRing) -> Vec<(u64, u64)> {
    let q = ring.q as u128;
    let mut out = Vec::new();
    for u in 0..ring.q {
        for d in 0..ring.q {
            let row = |r: [u64; 2]| (r[0] as u128 * u as u128 + r[1] as u128 * d as u128) % q;
            if row(m[0]) == 0 && row(m[1]) == 0 {
                out.push((u, d));
            }
        }
    }
    out
}

/// Integer valuation by repeated division, `e` for zero.
pub fn brute_valuation(x: u64, ring: LocalRing) -> u32 {
    let x = x % ring.q;
    (0..=ring.e).rev().find(|&t| x.is_multiple_of(ring.p.pow(t))).unwrap()
}

/// Do `f` and `g` agree as functions on every point?
pub fn same_function(f: &AffineMap, g: &AffineMap) -> bool {
    let n = f.modulus().get();
    (0..n).all(|x| f.apply(x) == g.apply(x))
}

/// Commutation by evaluating both composites on all of `Z/nZ`.
pub fn commute_pointwise(f: &AffineMap, g: &AffineMap) -> bool {
    let n = f.modulus().get();
    (0..n).all(|x| f.apply(g.apply(x)) == g.apply(f.apply(x)))
}

pub fn all_maps(n: u64) -> Vec<AffineMap> {
    let mut v = Vec::new();
    for a in 1..n {
        for b in 0..n {
            if let Ok(f) = AffineMap::new(n, a, b) {
                v.push(f);
            }
        }
    }
    v
}

/// Exhaustive search for a noncommuting pair in `AGL_1(Z/qZ)`.
pub fn has_noncommuting_pair(q: u64) -> bool {
    let all = all_maps(q);
    all.iter().any(|f| all.iter().any(|g| !commute_pointwise(f, g)))
}

/// Internal commutation table of a family, by pointwise evaluation.
pub fn commutation_table(fam: &[AffineMap]) -> Vec<Vec<bool>> {
    fam.iter().map(|x| fam.iter().map(|y| commute_pointwise(x, y)).collect()).collect()
}
