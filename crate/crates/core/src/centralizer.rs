//! Common centralizers in `AGL_1(Z/p^e)` through the Smith normal form of the
//! 2×2 commutation system, and their CRT products over `Z/nZ`.
//!
//! A map `G = (1 + u, d)` commutes with `F_i = (a_i, b_i)` iff
//! `b_i*u - s_i*d = 0` where `s_i = a_i - 1`. Over a local ring the solution
//! module of the two equations is read off from the Smith form
//! `U M V = diag(p^alpha, p^beta)` as `V (p^(e-alpha) R × p^(e-beta) R)`.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::crt::{crt_decompose, PrimePowerFactor};
use crate::error::Result;
use crate::modular::Modulus;
use crate::par::{self, Exec};

/// 2×2 matrix of residues, row-major.
pub type Mat2 = [[u64; 2]; 2];

pub const IDENTITY2: Mat2 = [[1, 0], [0, 1]];

/// The local ring `Z/p^e`; `p` is the uniformizer and `e` the nilpotency index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalRing {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl LocalRing {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        PrimePowerFactor::new(p, e).map(Self::from)
    }

    pub fn from_modulus(q: u64) -> Result<Self> {
        PrimePowerFactor::from_prime_power(q).map(Self::from)
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.q).expect("prime power is at least 2")
    }

    /// `p^t mod q`; equals 0 for `t >= e`.
    pub fn pow_p(&self, t: u32) -> u64 {
        if t >= self.e {
            0
        } else {
            self.p.pow(t)
        }
    }

    pub fn valuation(&self, x: u64) -> Valuation {
        valuation(x, *self)
    }
}

impl From<PrimePowerFactor> for LocalRing {
    fn from(f: PrimePowerFactor) -> Self {
        LocalRing { p: f.p, e: f.e, q: f.q }
    }
}

/// `v_p(x)` in `[0, e]`, with `v_p(0) = e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub u32);

pub fn valuation(x: u64, ring: LocalRing) -> Valuation {
    let mut x = x % ring.q;
    if x == 0 {
        return Valuation(ring.e);
    }
    let mut t = 0;
    while x.is_multiple_of(ring.p) {
        x /= ring.p;
        t += 1;
    }
    Valuation(t)
}

pub fn mat_mul(ring: &LocalRing, x: &Mat2, y: &Mat2) -> Mat2 {
    let r = ring.modulus();
    let mut out = [[0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = r.add(r.mul(x[i][0], y[0][j]), r.mul(x[i][1], y[1][j]));
        }
    }
    out
}

pub fn det(ring: &LocalRing, m: &Mat2) -> u64 {
    let r = ring.modulus();
    r.sub(r.mul(m[0][0], m[1][1]), r.mul(m[0][1], m[1][0]))
}

/// The system `b_i*u - s_i*d = 0` for a pair `(F0, F1)` over `Z/p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationMatrix {
    pub ring: LocalRing,
    /// Rows `(b_i, -s_i)`.
    pub entries: Mat2,
    /// `det(entries) = s0*b1 - s1*b0`; nonzero iff `F0` and `F1` do not commute.
    pub delta: u64,
}

pub fn commutation_matrix(f0: &AffineMap, f1: &AffineMap) -> Result<CommutationMatrix> {
    f0.commutes(f1)?;
    let ring = LocalRing::from_modulus(f0.modulus().get())?;
    let r = ring.modulus();
    let entries = [[f0.b(), r.neg(f0.s())], [f1.b(), r.neg(f1.s())]];
    Ok(CommutationMatrix { ring, entries, delta: det(&ring, &entries) })
}

/// `U M V = diag(p^alpha, p^beta)` with `U`, `V` invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub u: Mat2,
    pub v: Mat2,
    pub alpha: u32,
    pub beta: u32,
}

impl SmithDecomposition {
    pub fn diagonal(&self, ring: &LocalRing) -> Mat2 {
        [[ring.pow_p(self.alpha), 0], [0, ring.pow_p(self.beta)]]
    }
}

/// Smith normal form of a 2×2 matrix over `Z/p^e`.
///
/// Pivots on the entry of least valuation (first in row-major order), scales
/// it to a literal power of `p`, clears its row and column, then normalizes
/// the remaining corner the same way. The zero matrix gives `alpha = beta = e`.
pub fn smith_normal_form(m: &Mat2, ring: LocalRing) -> SmithDecomposition {
    let r = ring.modulus();
    let mut d = m.map(|row| row.map(|x| r.reduce(x)));
    let mut u = IDENTITY2;
    let mut v = IDENTITY2;

    let (mut pi, mut pj, mut t) = (0, 0, ring.e);
    for (i, row) in d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let Valuation(val) = valuation(x, ring);
            if val < t {
                (pi, pj, t) = (i, j, val);
            }
        }
    }
    if t == ring.e {
        return SmithDecomposition { u, v, alpha: ring.e, beta: ring.e };
    }

    if pi == 1 {
        d.swap(0, 1);
        u.swap(0, 1);
    }
    if pj == 1 {
        for row in d.iter_mut().chain(v.iter_mut()) {
            row.swap(0, 1);
        }
    }

    let pt = ring.p.pow(t);
    let w_inv = r.inv(d[0][0] / pt).expect("cofactor of a pivot is a unit");
    for x in d[0].iter_mut().chain(u[0].iter_mut()) {
        *x = r.mul(*x, w_inv);
    }

    // rows: R1 -= k R0
    let k = d[1][0] / pt;
    for mat in [&mut d, &mut u] {
        let top = mat[0];
        for j in 0..2 {
            mat[1][j] = r.sub(mat[1][j], r.mul(k, top[j]));
        }
    }
    // columns: C1 -= k' C0
    let k = d[0][1] / pt;
    for mat in [&mut d, &mut v] {
        for row in mat.iter_mut() {
            row[1] = r.sub(row[1], r.mul(k, row[0]));
        }
    }

    let Valuation(beta) = valuation(d[1][1], ring);
    if beta < ring.e {
        let w_inv = r.inv(d[1][1] / ring.p.pow(beta)).expect("cofactor of a pivot is a unit");
        for x in d[1].iter_mut().chain(u[1].iter_mut()) {
            *x = r.mul(*x, w_inv);
        }
    }
    debug_assert!(t <= beta);
    SmithDecomposition { u, v, alpha: t, beta }
}

/// Solutions `(u, d)` of `M (u, d)^T = 0`, as the image of
/// `p^(e-alpha) R × p^(e-beta) R` under `V`. Sorted, `p^(alpha+beta)` of them.
pub fn kernel_of(m: &Mat2, ring: LocalRing) -> Vec<(u64, u64)> {
    let snf = smith_normal_form(m, ring);
    kernel_from_smith(&snf, ring)
}

pub fn kernel(m: &CommutationMatrix) -> Vec<(u64, u64)> {
    kernel_of(&m.entries, m.ring)
}

fn kernel_from_smith(snf: &SmithDecomposition, ring: LocalRing) -> Vec<(u64, u64)> {
    let r = ring.modulus();
    let step_x = ring.p.pow(ring.e - snf.alpha);
    let step_y = ring.p.pow(ring.e - snf.beta);
    let v = snf.v;
    let mut out = Vec::with_capacity((ring.q / step_x * (ring.q / step_y)) as usize);
    for x in (0..ring.q).step_by(step_x as usize) {
        for y in (0..ring.q).step_by(step_y as usize) {
            let u = r.add(r.mul(v[0][0], x), r.mul(v[0][1], y));
            let d = r.add(r.mul(v[1][0], x), r.mul(v[1][1], y));
            out.push((u, d));
        }
    }
    out.sort_unstable();
    out
}

/// Smith-form data behind one local factor of a centralizer computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelStructure {
    pub ring: LocalRing,
    pub matrix: Mat2,
    pub delta: u64,
    /// `None` when `delta = 0`.
    pub delta_valuation: Option<u32>,
    pub alpha: u32,
    pub beta: u32,
    pub v: Mat2,
    pub kernel_size: u64,
}

/// A common centralizer `C(F0) ∩ C(F1)`, fully enumerated and sorted by `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerSet {
    pub modulus: Modulus,
    pub elements: Vec<AffineMap>,
    /// One entry per CRT factor, in factor order.
    pub structure: Vec<KernelStructure>,
}

impl CentralizerSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        is_abelian(&self.elements)
    }
}

fn local_parts(f0: &AffineMap, f1: &AffineMap) -> Result<(Vec<AffineMap>, KernelStructure)> {
    let cm = commutation_matrix(f0, f1)?;
    let ring = cm.ring;
    let snf = smith_normal_form(&cm.entries, ring);
    let ker = kernel_from_smith(&snf, ring);
    let r = ring.modulus();
    let mut elements: Vec<AffineMap> = ker
        .iter()
        .filter_map(|&(u, d)| AffineMap::with_modulus(r, r.add(1, u), d).ok())
        .collect();
    elements.sort_unstable();
    elements.dedup();
    let structure = KernelStructure {
        ring,
        matrix: cm.entries,
        delta: cm.delta,
        delta_valuation: (cm.delta != 0).then(|| valuation(cm.delta, ring).0),
        alpha: snf.alpha,
        beta: snf.beta,
        v: snf.v,
        kernel_size: ker.len() as u64,
    };
    Ok((elements, structure))
}

/// `C(F0) ∩ C(F1)` over a prime-power modulus.
pub fn common_centralizer_local(f0: &AffineMap, f1: &AffineMap) -> Result<CentralizerSet> {
    let (elements, structure) = local_parts(f0, f1)?;
    Ok(CentralizerSet { modulus: f0.modulus(), elements, structure: vec![structure] })
}

/// `C(F0) ∩ C(F1)` over any modulus: local centralizers of the projections,
/// recombined with the CRT idempotents.
pub fn common_centralizer_zn(f0: &AffineMap, f1: &AffineMap) -> Result<CentralizerSet> {
    f0.commutes(f1)?;
    let n = f0.modulus();
    let crt = crt_decompose(n.get())?;
    let mut acc: Vec<(u64, u64)> = vec![(0, 0)];
    let mut structure = Vec::with_capacity(crt.len());
    for (factor, &idem) in crt.factors.iter().zip(&crt.idempotents) {
        let (local, st) = local_parts(&f0.project(factor.q)?, &f1.project(factor.q)?)?;
        structure.push(st);
        acc = acc
            .iter()
            .flat_map(|&(a, b)| {
                local
                    .iter()
                    .map(move |g| (n.add(a, n.mul(g.a(), idem)), n.add(b, n.mul(g.b(), idem))))
            })
            .collect();
    }
    let mut elements: Vec<AffineMap> = acc
        .into_iter()
        .map(|(a, b)| AffineMap::with_modulus(n, a, b).expect("CRT recombination of units is a unit"))
        .collect();
    elements.sort_unstable();
    Ok(CentralizerSet { modulus: n, elements, structure })
}

/// True iff every pair of `elements` commutes. All elements must share a modulus.
pub fn is_abelian(elements: &[AffineMap]) -> bool {
    is_abelian_with(Exec::default(), elements)
}

pub fn is_abelian_with(exec: Exec, elements: &[AffineMap]) -> bool {
    if let Some(first) = elements.first() {
        debug_assert!(elements.iter().all(|g| g.modulus() == first.modulus()));
    }
    par::all_range(exec, elements.len(), |i| {
        elements[i + 1..].iter().all(|g| elements[i].commutes_unchecked(g))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn ring(p: u64, e: u32) -> LocalRing {
        LocalRing::new(p, e).unwrap()
    }

    fn m(n: u64, a: u64, b: u64) -> AffineMap {
        AffineMap::new(n, a, b).unwrap()
    }

    fn pairs(set: &CentralizerSet) -> Vec<(u64, u64)> {
        set.elements.iter().map(|g| (g.a(), g.b())).collect()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(6, ring(3, 2)), Valuation(1));
        assert_eq!(valuation(0, ring(3, 2)), Valuation(2));
        assert_eq!(valuation(0, ring(2, 8)), Valuation(8));
        assert_eq!(valuation(4, ring(3, 2)), Valuation(0));
        assert_eq!(valuation(128, ring(2, 8)), Valuation(7));
    }

    #[test]
    fn commutation_matrix_examples() {
        let cm = commutation_matrix(&m(9, 1, 1), &m(9, 4, 0)).unwrap();
        assert_eq!(cm.entries, [[1, 0], [0, 6]]);
        assert_eq!(cm.delta, 6);

        let f = m(9, 4, 7);
        assert_eq!(commutation_matrix(&f, &f).unwrap().delta, 0);

        let cm = commutation_matrix(&m(9, 1, 4), &m(9, 7, 0)).unwrap();
        assert_eq!(cm.delta, 3);
        assert!(!m(9, 1, 4).commutes(&m(9, 7, 0)).unwrap());

        assert!(matches!(commutation_matrix(&m(12, 1, 1), &m(12, 5, 0)), Err(Error::NotPrimePower(12))));
    }

    #[test]
    fn delta_matches_product_formula() {
        // s0*b1 - s1*b0 computed directly
        let (f0, f1) = (m(27, 4, 5), m(27, 10, 2));
        let r = Modulus::new(27).unwrap();
        let expected = r.sub(r.mul(f0.s(), f1.b()), r.mul(f1.s(), f0.b()));
        assert_eq!(commutation_matrix(&f0, &f1).unwrap().delta, expected);
    }

    fn check_snf(mat: &Mat2, rg: LocalRing) -> SmithDecomposition {
        let snf = smith_normal_form(mat, rg);
        let prod = mat_mul(&rg, &mat_mul(&rg, &snf.u, mat), &snf.v);
        assert_eq!(prod, snf.diagonal(&rg), "matrix {mat:?} mod {}", rg.q);
        assert!(rg.modulus().is_unit(det(&rg, &snf.u)));
        assert!(rg.modulus().is_unit(det(&rg, &snf.v)));
        assert!(snf.alpha <= snf.beta && snf.beta <= rg.e);
        snf
    }

    #[test]
    fn snf_examples() {
        let rg = ring(3, 2);
        let snf = check_snf(&[[1, 0], [0, 3]], rg);
        assert_eq!((snf.alpha, snf.beta), (0, 1));
        assert_eq!((snf.u, snf.v), (IDENTITY2, IDENTITY2));

        let snf = check_snf(&[[3, 3], [3, 6]], rg);
        assert_eq!((snf.alpha, snf.beta), (1, 1));

        let snf = check_snf(&[[0, 0], [0, 0]], rg);
        assert_eq!((snf.alpha, snf.beta), (2, 2));
    }

    #[test]
    fn snf_pivot_in_lower_right() {
        let rg = ring(2, 3);
        let snf = check_snf(&[[4, 2], [6, 1]], rg);
        assert_eq!(snf.alpha, 0);
        let snf = check_snf(&[[0, 0], [0, 4]], rg);
        assert_eq!((snf.alpha, snf.beta), (2, 3));
    }

    #[test]
    fn kernel_examples() {
        let rg = ring(3, 2);
        assert_eq!(kernel_of(&[[1, 0], [0, 6]], rg), vec![(0, 0), (0, 3), (0, 6)]);
        assert_eq!(kernel_of(&[[0, 0], [0, 0]], rg).len(), 81);
        assert_eq!(kernel_of(&IDENTITY2, rg), vec![(0, 0)]);
    }

    #[test]
    fn local_centralizer_examples() {
        let c = common_centralizer_local(&m(9, 1, 1), &m(9, 4, 0)).unwrap();
        assert_eq!(pairs(&c), vec![(1, 0), (1, 3), (1, 6)]);
        assert!(c.is_abelian());
        assert_eq!(c.structure[0].delta_valuation, Some(1));

        let id = m(9, 1, 0);
        let c = common_centralizer_local(&id, &id).unwrap();
        assert_eq!(c.len(), 54);
        assert!(!c.is_abelian());
        assert_eq!(c.structure[0].delta_valuation, None);

        let c = common_centralizer_local(&m(5, 1, 1), &m(5, 2, 0)).unwrap();
        assert_eq!(pairs(&c), vec![(1, 0)]);
    }

    #[test]
    fn is_abelian_examples() {
        assert!(is_abelian(&[m(9, 1, 0), m(9, 1, 3), m(9, 1, 6)]));
        assert!(!is_abelian(&[m(9, 1, 1), m(9, 2, 0)]));
        assert!(is_abelian(&[m(9, 2, 5)]));
        assert!(is_abelian(&[]));
    }

    #[test]
    fn zn_centralizer_examples() {
        let c = common_centralizer_zn(&m(12, 1, 4), &m(12, 5, 0)).unwrap();
        let mut expected = Vec::new();
        for a in [1, 7] {
            for b in [0, 3, 6, 9] {
                expected.push((a, b));
            }
        }
        assert_eq!(pairs(&c), expected);
        assert!(!c.is_abelian());
        assert!(!m(12, 7, 0).commutes(&m(12, 1, 9)).unwrap());

        let id = m(12, 1, 0);
        assert_eq!(common_centralizer_zn(&id, &id).unwrap().len(), 48);

        let c = common_centralizer_zn(&m(9, 1, 1), &m(9, 2, 0)).unwrap();
        assert!(c.is_abelian());
        assert_eq!(c, common_centralizer_local(&m(9, 1, 1), &m(9, 2, 0)).unwrap());
    }

    #[test]
    fn centralizer_members_commute_with_inputs() {
        let (f0, f1) = (m(20, 3, 4), m(20, 1, 10));
        let c = common_centralizer_zn(&f0, &f1).unwrap();
        assert!(!c.is_empty());
        for g in &c.elements {
            assert!(g.commutes(&f0).unwrap() && g.commutes(&f1).unwrap());
        }
        assert!(c.elements.windows(2).all(|w| w[0] < w[1]));
    }
}
