//! Brute-force oracles: everything here is computed by direct enumeration of
//! `AGL_1(Z/nZ)` and composition-based pair checks, so it can be held against the
//! structural results in [`crate::centralizer`] and [`crate::classify`].

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::affine::{verify_square, AffineMap, SquareVerdict};
use crate::centralizer::{common_centralizer_local, common_centralizer_zn};
use crate::error::{Error, Result};
use crate::modular::Modulus;
use crate::par::{self, Exec};
use crate::permutation::Permutation;

/// Largest modulus the exhaustive modes accept.
pub const EXHAUSTIVE_LIMIT: u64 = 1000;

fn guard(n: u64) -> Result<Modulus> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::BudgetExceeded { n, limit: EXHAUSTIVE_LIMIT });
    }
    Modulus::new(n)
}

/// All `n·φ(n)` affine maps mod `n`, sorted by `(a, b)`.
pub fn enumerate_agl(n: u64) -> Result<Vec<AffineMap>> {
    let m = Modulus::new(n)?;
    Ok(m.units()
        .flat_map(|a| (0..n).map(move |b| AffineMap::with_modulus(m, a, b).expect("unit multiplier")))
        .collect())
}

/// Composes both ways and compares; deliberately avoids the `(a-1)d = (c-1)b` shortcut.
fn commute_by_composition(f: &AffineMap, g: &AffineMap) -> bool {
    f.compose(g).expect("shared modulus") == g.compose(f).expect("shared modulus")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FoundSquare {
    pub f0: AffineMap,
    pub f1: AffineMap,
    pub g0: AffineMap,
    pub g1: AffineMap,
    pub verdict: SquareVerdict,
}

impl FoundSquare {
    pub fn maps(&self) -> [AffineMap; 4] {
        [self.f0, self.f1, self.g0, self.g1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub modulus: Modulus,
    /// Lexicographically smallest square in `((a0,b0),(a1,b1),(a2,b2),(a3,b3))` order.
    pub found: Option<FoundSquare>,
    pub pairs_scanned: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn brute_force_square_exists(n: u64) -> Result<SearchReport> {
    brute_force_square_exists_with(n, Exec::default())
}

/// Scans ordered pairs `(F0, F1)` row by row; for each noncommuting pair the
/// common centralizer is searched for a noncommuting `(G0, G1)`.
///
/// Each `F0` row stops at its own first hit and rows are scanned
/// independently, so both the witness and `pairs_scanned` are the same under
/// either execution strategy.
pub fn brute_force_square_exists_with(n: u64, exec: Exec) -> Result<SearchReport> {
    let start = Instant::now();
    let modulus = guard(n)?;
    let elements = enumerate_agl(n)?;
    let rows = par::map(exec, &elements, |f0| {
        let mut scanned = 0u64;
        for f1 in &elements {
            scanned += 1;
            if commute_by_composition(f0, f1) {
                continue;
            }
            let cent = common_centralizer_zn(f0, f1).expect("shared modulus");
            if let Some((g0, g1)) = first_noncommuting_pair(&cent.elements) {
                return (scanned, Some((*f0, *f1, g0, g1)));
            }
        }
        (scanned, None)
    });
    let pairs_scanned = rows.iter().map(|r| r.0).sum();
    let found = rows
        .into_iter()
        .find_map(|r| r.1)
        .map(|(f0, f1, g0, g1)| {
            let verdict = verify_square(&f0, &f1, &g0, &g1).expect("shared modulus");
            FoundSquare { f0, f1, g0, g1, verdict }
        });
    Ok(SearchReport { modulus, found, pairs_scanned, elapsed: start.elapsed() })
}

/// First `(x, y)` in lexicographic order with `x, y` not commuting.
fn first_noncommuting_pair(sorted: &[AffineMap]) -> Option<(AffineMap, AffineMap)> {
    sorted.iter().find_map(|x| {
        sorted
            .iter()
            .find(|y| !commute_by_composition(x, y))
            .map(|y| (*x, *y))
    })
}

/// `C(F0) ∩ C(F1)` by scanning the whole group.
pub fn brute_force_centralizer(f0: &AffineMap, f1: &AffineMap) -> Result<Vec<AffineMap>> {
    f0.commutes(f1)?;
    guard(f0.modulus().get())?;
    Ok(enumerate_agl(f0.modulus().get())?
        .into_iter()
        .filter(|g| commute_by_composition(g, f0) && commute_by_composition(g, f1))
        .collect())
}

/// Whether `AGL_1(Z/nZ)` has any noncommuting pair, by exhaustive search.
pub fn has_noncommuting_pair_exhaustive(n: u64) -> Result<bool> {
    guard(n)?;
    let elements = enumerate_agl(n)?;
    Ok(elements
        .iter()
        .any(|f| elements.iter().any(|g| !commute_by_composition(f, g))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionReport {
    pub modulus: Modulus,
    pub noncommuting_pairs: u64,
    /// Noncommuting pairs whose common centralizer is not abelian.
    pub counterexamples: Vec<(AffineMap, AffineMap)>,
}

/// Checks every noncommuting pair mod `n` for an abelian common centralizer.
/// With `brute` the centralizer comes from a full group scan, otherwise from
/// the Smith-form computation (which requires `n` to be a prime power).
pub fn local_obstruction_scan(n: u64, exec: Exec, brute: bool) -> Result<ObstructionReport> {
    let modulus = guard(n)?;
    let elements = enumerate_agl(n)?;
    let rows = par::map_range(exec, elements.len(), |i| -> Result<(u64, Vec<(AffineMap, AffineMap)>)> {
        let f0 = &elements[i];
        let mut count = 0;
        let mut bad = Vec::new();
        for f1 in &elements {
            if commute_by_composition(f0, f1) {
                continue;
            }
            count += 1;
            let cent = if brute {
                brute_force_centralizer(f0, f1)?
            } else {
                common_centralizer_local(f0, f1)?.elements
            };
            if first_noncommuting_pair(&cent).is_some() {
                bad.push((*f0, *f1));
            }
        }
        Ok((count, bad))
    });
    let mut report = ObstructionReport { modulus, noncommuting_pairs: 0, counterexamples: Vec::new() };
    for row in rows {
        let (count, bad) = row?;
        report.noncommuting_pairs += count;
        report.counterexamples.extend(bad);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyReport {
    pub cross_commuting: bool,
    /// `(i, j)` with `F_i` and `G_j` not commuting.
    pub cross_failures: Vec<(usize, usize)>,
    /// `(r, s)` with `r < s` and `F_r`, `F_s` not commuting.
    pub f_noncommuting: Vec<(usize, usize)>,
    pub g_noncommuting: Vec<(usize, usize)>,
}

pub fn verify_families(fs: &[AffineMap], gs: &[AffineMap]) -> Result<FamilyReport> {
    if let Some(first) = fs.iter().chain(gs).next() {
        for f in fs.iter().chain(gs) {
            if f.modulus() != first.modulus() {
                return Err(Error::ModulusMismatch { left: first.modulus().get(), right: f.modulus().get() });
            }
        }
    }
    let internal = |fam: &[AffineMap]| {
        let mut out = Vec::new();
        for r in 0..fam.len() {
            for s in r + 1..fam.len() {
                if !commute_by_composition(&fam[r], &fam[s]) {
                    out.push((r, s));
                }
            }
        }
        out
    };
    let mut cross_failures = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            if !commute_by_composition(f, g) {
                cross_failures.push((i, j));
            }
        }
    }
    Ok(FamilyReport {
        cross_commuting: cross_failures.is_empty(),
        cross_failures,
        f_noncommuting: internal(fs),
        g_noncommuting: internal(gs),
    })
}

/// `(1 2 3), (1 2), (4 5 6), (4 5)` inside `S_n`.
pub fn sn_square(n: usize) -> Result<[Permutation; 4]> {
    if n < 6 {
        return Err(Error::UnsupportedDegree { degree: n, min: 6 });
    }
    Ok([
        Permutation::from_cycles(n, &[&[1, 2, 3]])?,
        Permutation::from_cycles(n, &[&[1, 2]])?,
        Permutation::from_cycles(n, &[&[4, 5, 6]])?,
        Permutation::from_cycles(n, &[&[4, 5]])?,
    ])
}

/// The square test of [`verify_square`], for permutations.
pub fn verify_permutation_square(square: &[Permutation; 4]) -> Result<SquareVerdict> {
    let [f0, f1, g0, g1] = square;
    let mut cross = [[false; 2]; 2];
    for (i, f) in [f0, f1].into_iter().enumerate() {
        for (j, g) in [g0, g1].into_iter().enumerate() {
            cross[i][j] = f.commutes(g)?;
        }
    }
    let f_noncommuting = !f0.commutes(f1)?;
    let g_noncommuting = !g0.commutes(g1)?;
    let is_square = cross.iter().flatten().all(|&c| c) && f_noncommuting && g_noncommuting;
    Ok(SquareVerdict { cross, f_noncommuting, g_noncommuting, is_square })
}
