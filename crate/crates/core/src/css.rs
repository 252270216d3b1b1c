//! Two-row block arrays built from affine families, with GF(2)
//! orthogonality, commuting 2×3 windows, Tanner-graph girth, and alist I/O.
//!
//! `H_X` has block `(j, l)` equal to `P(F_{l-j})` for `l < m` and
//! `P(G_{l-m-j})` for `l >= m`. `H_Z` has block `(k, l)` equal to
//! `P(G_{k-l})^T` for `l < m` and `P(F_{k-(l-m)})^T` for `l >= m`. All indices
//! are taken mod `m`, and `P(f)` has a one at `(f(x), x)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Default cycle-length cap for girth searches.
pub const DEFAULT_GIRTH_CAP: usize = 12;

/// A binary matrix stored as its set of one-positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SparseBinaryMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    coordinates: Vec<[usize; 2]>,
}

impl TryFrom<MatrixJson> for SparseBinaryMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        SparseBinaryMatrix::new(j.rows, j.cols, j.coordinates.into_iter().map(|[r, c]| (r, c)))
    }
}

impl From<SparseBinaryMatrix> for MatrixJson {
    fn from(m: SparseBinaryMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            coordinates: m.entries.into_iter().map(|(r, c)| [r, c]).collect(),
        }
    }
}

impl SparseBinaryMatrix {
    pub fn new(rows: usize, cols: usize, ones: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut entries = BTreeSet::new();
        for (r, c) in ones {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!("({r}, {c}) outside {rows}x{cols}")));
            }
            if !entries.insert((r, c)) {
                return Err(Error::Shape(format!("duplicate entry ({r}, {c})")));
            }
        }
        Ok(SparseBinaryMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBinaryMatrix { rows, cols, entries: BTreeSet::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseBinaryMatrix { rows: n, cols: n, entries: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r, c))
    }

    /// One-positions in row-major order.
    pub fn coordinates(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c) in &self.entries {
            out[r].push(c);
        }
        out
    }

    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for &(r, c) in &self.entries {
            out[c].push(r);
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseBinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    fn check_product(&self, other: &Self) -> Result<()> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Product over the integers, as a map from position to (nonzero) value.
    pub fn mul_counts(&self, other: &Self) -> Result<BTreeMap<(usize, usize), u64>> {
        self.check_product(other)?;
        let rhs = other.row_supports();
        let mut out = BTreeMap::new();
        for &(r, k) in &self.entries {
            for &c in &rhs[k] {
                *out.entry((r, c)).or_insert(0) += 1;
            }
        }
        Ok(out)
    }

    pub fn mul_gf2(&self, other: &Self) -> Result<Self> {
        let counts = self.mul_counts(other)?;
        Ok(SparseBinaryMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: counts.into_iter().filter(|&(_, v)| v % 2 == 1).map(|(k, _)| k).collect(),
        })
    }

    pub fn block(&self, r0: usize, c0: usize, height: usize, width: usize) -> Self {
        SparseBinaryMatrix {
            rows: height,
            cols: width,
            entries: self
                .entries
                .range((r0, 0)..(r0 + height, 0))
                .filter(|&&(_, c)| c >= c0 && c < c0 + width)
                .map(|&(r, c)| (r - r0, c - c0))
                .collect(),
        }
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        self.col_supports().iter().map(Vec::len).collect()
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.row_supports().iter().map(Vec::len).collect()
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    fn place(&mut self, r0: usize, c0: usize, block: &SparseBinaryMatrix) {
        self.entries.extend(block.entries.iter().map(|&(r, c)| (r0 + r, c0 + c)));
    }
}

/// Permutation matrix with `P[f(x)][x] = 1`, so `P(f∘g) = P(f)·P(g)`.
pub fn perm_matrix(f: &AffineMap) -> SparseBinaryMatrix {
    let n = f.modulus().get() as usize;
    SparseBinaryMatrix {
        rows: n,
        cols: n,
        entries: (0..n).map(|x| (f.apply(x as u64) as usize, x)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    F,
    G,
}

/// Which family member fills a block, and whether it is transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockRef {
    pub family: Family,
    pub index: usize,
    pub transposed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockArrayPair {
    pub m: usize,
    /// Side length of each permutation block.
    pub n: usize,
    pub hx: SparseBinaryMatrix,
    pub hz: SparseBinaryMatrix,
    /// `hx_blocks[j][l]` describes block `(j, l)` of `hx`; likewise for `hz`.
    pub hx_blocks: Vec<Vec<BlockRef>>,
    pub hz_blocks: Vec<Vec<BlockRef>>,
}

fn check_family(fs: &[AffineMap]) -> Result<()> {
    if fs.len() < 3 {
        return Err(Error::FamilyTooSmall(fs.len()));
    }
    for f in &fs[1..] {
        if f.modulus() != fs[0].modulus() {
            return Err(Error::ModulusMismatch { left: fs[0].modulus().get(), right: f.modulus().get() });
        }
    }
    Ok(())
}

#[inline]
fn wrap(i: isize, m: usize) -> usize {
    i.rem_euclid(m as isize) as usize
}

pub fn build_block_arrays(fs: &[AffineMap], gs: &[AffineMap]) -> Result<BlockArrayPair> {
    if fs.len() != gs.len() {
        return Err(Error::FamilyLengthMismatch { f: fs.len(), g: gs.len() });
    }
    check_family(fs)?;
    check_family(gs)?;
    fs[0].commutes(&gs[0])?;
    let m = fs.len();
    let n = fs[0].modulus().get() as usize;

    let mut hx_blocks = vec![Vec::with_capacity(2 * m), Vec::with_capacity(2 * m)];
    let mut hz_blocks = vec![Vec::with_capacity(2 * m), Vec::with_capacity(2 * m)];
    for row in 0..2isize {
        for l in 0..2 * m {
            let (left, lm) = (l < m, (l % m) as isize);
            hx_blocks[row as usize].push(BlockRef {
                family: if left { Family::F } else { Family::G },
                index: wrap(lm - row, m),
                transposed: false,
            });
            hz_blocks[row as usize].push(BlockRef {
                family: if left { Family::G } else { Family::F },
                index: wrap(row - lm, m),
                transposed: true,
            });
        }
    }

    let pf: Vec<SparseBinaryMatrix> = fs.iter().map(perm_matrix).collect();
    let pg: Vec<SparseBinaryMatrix> = gs.iter().map(perm_matrix).collect();
    let render = |blocks: &[Vec<BlockRef>]| {
        let mut h = SparseBinaryMatrix::zeros(2 * n, 2 * m * n);
        for (j, row) in blocks.iter().enumerate() {
            for (l, b) in row.iter().enumerate() {
                let p = match b.family {
                    Family::F => &pf[b.index],
                    Family::G => &pg[b.index],
                };
                if b.transposed {
                    h.place(j * n, l * n, &p.transpose());
                } else {
                    h.place(j * n, l * n, p);
                }
            }
        }
        h
    };
    Ok(BlockArrayPair { m, n, hx: render(&hx_blocks), hz: render(&hz_blocks), hx_blocks, hz_blocks })
}

/// The `2 × m` array `[P(F_{l-j})]`, i.e. one half of `H_X`.
pub fn two_row_array(family: &[AffineMap]) -> Result<SparseBinaryMatrix> {
    check_family(family)?;
    let m = family.len();
    let n = family[0].modulus().get() as usize;
    let mut h = SparseBinaryMatrix::zeros(2 * n, m * n);
    for j in 0..2 {
        for l in 0..m {
            let f = &family[wrap(l as isize - j as isize, m)];
            h.place(j * n, l * n, &perm_matrix(f));
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrthogonalityReport {
    pub is_zero: bool,
    pub nonzero_entries: usize,
    /// Block positions `(j, k)` of `H_X H_Z^T` holding a nonzero entry.
    pub nonzero_blocks: Vec<(usize, usize)>,
}

/// `H_X · H_Z^T` over GF(2), computed on the flat matrices.
pub fn gf2_product_is_zero(pair: &BlockArrayPair) -> OrthogonalityReport {
    let product = pair.hx.mul_gf2(&pair.hz.transpose()).expect("H_X and H_Z share a width");
    let blocks: BTreeSet<(usize, usize)> =
        product.coordinates().map(|(r, c)| (r / pair.n, c / pair.n)).collect();
    OrthogonalityReport {
        is_zero: product.is_zero(),
        nonzero_entries: product.nnz(),
        nonzero_blocks: blocks.into_iter().collect(),
    }
}

/// A cyclic 2×3 window `[F_l F_{l+1} F_{l+2}; F_{l-1} F_l F_{l+1}]` of
/// pairwise commuting members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowWitness {
    pub position: usize,
    pub blocks: [[usize; 3]; 2],
}

pub fn detect_commuting_2x3(family: &[AffineMap]) -> Result<Vec<WindowWitness>> {
    check_family(family)?;
    let m = family.len();
    let mut out = Vec::new();
    for l in 0..m {
        let at = |d: isize| wrap(l as isize + d, m);
        let blocks = [[at(0), at(1), at(2)], [at(-1), at(0), at(1)]];
        let members: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
        let members: Vec<usize> = members.into_iter().collect();
        let commuting = members.iter().enumerate().all(|(k, &x)| {
            members[k + 1..].iter().all(|&y| family[x].commutes_unchecked(&family[y]))
        });
        if commuting {
            out.push(WindowWitness { position: l, blocks });
        }
    }
    Ok(out)
}

pub fn tanner_girth(h: &SparseBinaryMatrix, cap: usize) -> Option<usize> {
    tanner_girth_with(Exec::default(), h, cap)
}

/// Shortest cycle of the Tanner graph of `h` when it is at most `cap`.
///
/// Breadth-first search from every variable node, cut off after `cap / 2`
/// levels; the minimum over roots is exact because a root on a shortest cycle
/// closes it at depth `girth / 2`.
pub fn tanner_girth_with(exec: Exec, h: &SparseBinaryMatrix, cap: usize) -> Option<usize> {
    if cap < 4 {
        return None;
    }
    let cols = h.cols();
    // variables 0..cols, checks cols..cols+rows
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); cols + h.rows()];
    for (r, c) in h.coordinates() {
        adj[c].push(cols + r);
        adj[cols + r].push(c);
    }
    let max_depth = cap / 2;
    let per_root = par::map_range(exec, cols, |root| {
        let mut dist = vec![usize::MAX; adj.len()];
        let mut parent = vec![usize::MAX; adj.len()];
        let mut queue = VecDeque::from([root]);
        dist[root] = 0;
        let mut best = usize::MAX;
        while let Some(u) = queue.pop_front() {
            if dist[u] >= max_depth || 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in &adj[u] {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
        best
    });
    per_root.into_iter().min().filter(|&g| g <= cap)
}

/// Standard alist text: dimensions, maximum degrees, the degree lists, then
/// 1-based supports per column and per row.
pub fn export_alist(h: &SparseBinaryMatrix) -> String {
    let cols = h.col_supports();
    let rows = h.row_supports();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.cols(), h.rows());
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&mut cols.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut rows.iter().map(Vec::len)));
    for support in cols.iter().chain(&rows) {
        let _ = writeln!(out, "{}", join(&mut support.iter().map(|x| x + 1)));
    }
    out
}

/// Parses alist text; zero entries (the usual padding) are skipped, and the
/// column and row lists must agree.
pub fn parse_alist(text: &str) -> Result<SparseBinaryMatrix> {
    let bad = |msg: &str| Error::Parse(format!("alist: {msg}"));
    let mut lines = text.lines();
    let mut numbers = |what: &str| -> Result<Vec<usize>> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| bad(&format!("{what}: {t:?}: {e}"))))
            .collect()
    };
    let dims = numbers("dimensions")?;
    let [n_cols, n_rows] = dims[..] else {
        return Err(bad("first line must be \"cols rows\""));
    };
    numbers("maximum degrees")?;
    let col_deg = numbers("column degrees")?;
    let row_deg = numbers("row degrees")?;
    if col_deg.len() != n_cols || row_deg.len() != n_rows {
        return Err(bad("degree list lengths do not match dimensions"));
    }
    let mut by_col = BTreeSet::new();
    for (c, &deg) in col_deg.iter().enumerate() {
        let support: Vec<usize> = numbers("column support")?.into_iter().filter(|&x| x != 0).collect();
        if support.len() != deg {
            return Err(bad(&format!("column {} has {} entries, expected {deg}", c + 1, support.len())));
        }
        by_col.extend(support.into_iter().map(|r| (r - 1, c)));
    }
    let mut by_row = BTreeSet::new();
    for (r, &deg) in row_deg.iter().enumerate() {
        let support: Vec<usize> = numbers("row support")?.into_iter().filter(|&x| x != 0).collect();
        if support.len() != deg {
            return Err(bad(&format!("row {} has {} entries, expected {deg}", r + 1, support.len())));
        }
        by_row.extend(support.into_iter().map(|c| (r, c - 1)));
    }
    if by_col != by_row {
        return Err(bad("column and row lists disagree"));
    }
    SparseBinaryMatrix::new(n_rows, n_cols, by_col)
}
