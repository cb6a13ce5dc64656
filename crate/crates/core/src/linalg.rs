//! Sparse column matrices and block-wise rank / nullspace.
//!
//! Every map assembled in this crate is equivariant under a finite group of
//! coordinate sign flips, so in the standard tensor bases its columns fall
//! into many small groups with disjoint row supports.  Rank and nullspace
//! are computed per connected component of the row/column incidence graph:
//! exactly by Gauss-Jordan over the field for [`ScalarQ3`], and by SVD for
//! `f64`, with a rank threshold relative to the largest singular value of
//! the whole matrix.

use std::collections::HashMap;
use std::hash::Hash;

use nalgebra::DMatrix;

use crate::q3::ScalarQ3;
use crate::scalar::Scalar;

/// Sparse vector as `(index, value)` pairs, indices strictly increasing.
pub type SparseVec<S> = Vec<(usize, S)>;

/// Default relative rank tolerance for floating-point nullspaces.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SparseCols<S> {
    pub nrows: usize,
    pub cols: Vec<SparseVec<S>>,
}

impl<S: Scalar> SparseCols<S> {
    pub fn new(nrows: usize) -> Self {
        SparseCols {
            nrows,
            cols: Vec::new(),
        }
    }

    pub fn from_cols(nrows: usize, cols: Vec<SparseVec<S>>) -> Self {
        SparseCols { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn push(&mut self, col: SparseVec<S>) {
        self.cols.push(col);
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.nrows];
        for (c, xc) in self.cols.iter().zip(x) {
            if xc.is_zero() {
                continue;
            }
            for (r, v) in c {
                out[*r] = out[*r].clone() + v.clone() * xc.clone();
            }
        }
        out
    }
}

/// Column builder that numbers row keys on first use.
#[derive(Debug)]
pub struct KeyedCols<K, S> {
    index: HashMap<K, usize>,
    keys: Vec<K>,
    cols: Vec<SparseVec<S>>,
}

impl<K: Hash + Eq + Clone, S: Scalar> Default for KeyedCols<K, S> {
    fn default() -> Self {
        KeyedCols {
            index: HashMap::new(),
            keys: Vec::new(),
            cols: Vec::new(),
        }
    }
}

impl<K: Hash + Eq + Clone, S: Scalar> KeyedCols<K, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_col<I: IntoIterator<Item = (K, S)>>(&mut self, entries: I) {
        let mut acc: HashMap<usize, S> = HashMap::new();
        for (k, v) in entries {
            let next = self.keys.len();
            let r = *self.index.entry(k.clone()).or_insert(next);
            if r == next {
                self.keys.push(k);
            }
            let slot = acc.entry(r).or_insert_with(S::zero);
            *slot = slot.clone() + v;
        }
        let mut col: SparseVec<S> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        col.sort_by_key(|e| e.0);
        self.cols.push(col);
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn finish(self) -> (Vec<K>, SparseCols<S>) {
        let n = self.keys.len();
        (
            self.keys,
            SparseCols {
                nrows: n,
                cols: self.cols,
            },
        )
    }
}

/// Columns and rows of one connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub cols: Vec<usize>,
    pub rows: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the bipartite row/column graph, ordered by
/// smallest column.
pub fn blocks<S>(nrows: usize, cols: &[SparseVec<S>]) -> Vec<Block> {
    let mut parent: Vec<usize> = (0..cols.len()).collect();
    let mut owner: Vec<usize> = vec![usize::MAX; nrows];
    for (c, col) in cols.iter().enumerate() {
        for (r, _) in col {
            if owner[*r] == usize::MAX {
                owner[*r] = c;
            } else {
                let (a, b) = (find(&mut parent, owner[*r]), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Block> = Vec::new();
    for c in 0..cols.len() {
        let root = find(&mut parent, c);
        let id = *slot.entry(root).or_insert_with(|| {
            out.push(Block {
                cols: Vec::new(),
                rows: Vec::new(),
            });
            out.len() - 1
        });
        out[id].cols.push(c);
    }
    for (r, &c) in owner.iter().enumerate() {
        if c != usize::MAX {
            let root = find(&mut parent, c);
            out[slot[&root]].rows.push(r);
        }
    }
    out
}

/// Row-major dense block.
#[derive(Clone, Debug)]
pub struct Dense<S> {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Dense<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Dense {
            nrows,
            ncols,
            data: vec![S::zero(); nrows * ncols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.ncols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.ncols + c] = v;
    }
}

#[derive(Clone, Debug)]
pub struct Reduced<S> {
    pub rank: usize,
    /// Independent columns, in block-local column indices.
    pub pivots: Vec<usize>,
    /// Nullspace basis, each of length `ncols`.
    pub kernel: Vec<Vec<S>>,
}

/// Scalars with a block elimination kernel.
pub trait Solve: Scalar {
    fn reduce_blocks(blocks: &[Dense<Self>], rel_tol: f64) -> Vec<Reduced<Self>>;
}

impl Solve for ScalarQ3 {
    fn reduce_blocks(blocks: &[Dense<Self>], _rel_tol: f64) -> Vec<Reduced<Self>> {
        blocks.iter().map(gauss_jordan).collect()
    }
}

/// Reduced row echelon form over the field; rank, pivots and kernel.
fn gauss_jordan<S: Scalar>(m: &Dense<S>) -> Reduced<S> {
    let mut rows: Vec<Vec<S>> = (0..m.nrows)
        .map(|r| m.data[r * m.ncols..(r + 1) * m.ncols].to_vec())
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..m.ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().expect("nonzero pivot");
        for v in rows[rank].iter_mut().skip(c) {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[k] = row[k].clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut kernel = Vec::new();
    let mut is_pivot = vec![false; m.ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..m.ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); m.ncols];
        v[free] = S::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][free].clone();
        }
        kernel.push(v);
    }
    Reduced { rank, pivots, kernel }
}

impl Solve for f64 {
    fn reduce_blocks(blocks: &[Dense<Self>], rel_tol: f64) -> Vec<Reduced<Self>> {
        use rayon::prelude::*;
        let factored: Vec<(Vec<f64>, DMatrix<f64>)> = blocks.par_iter().map(svd_right).collect();
        let smax = factored
            .iter()
            .flat_map(|(s, _)| s.iter().copied())
            .fold(0.0f64, f64::max);
        let thresh = rel_tol * smax;
        blocks
            .iter()
            .zip(factored)
            .map(|(b, (s, v))| {
                let rank = s.iter().filter(|&&x| x > thresh).count();
                let kernel = (0..b.ncols)
                    .filter(|&i| s[i] <= thresh)
                    .map(|i| v.column(i).iter().copied().collect())
                    .collect();
                Reduced {
                    rank,
                    pivots: greedy_pivots(b, thresh),
                    kernel,
                }
            })
            .collect()
    }
}

/// Singular values (padded with zeros to `ncols`) and the full right factor.
fn svd_right(b: &Dense<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = b.ncols;
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let a = DMatrix::from_row_slice(b.nrows, n, &b.data);
    // square it up: QR for tall blocks, zero rows for wide ones
    let sq = if b.nrows > n {
        a.qr().r()
    } else {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (b.nrows, n)).copy_from(&a);
        p
    };
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.resize(n, 0.0);
    (s, vt.transpose())
}

/// Columns kept by greedy Gram-Schmidt; residual norms above `thresh` count.
fn greedy_pivots(b: &Dense<f64>, thresh: f64) -> Vec<usize> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..b.ncols {
        let mut v: Vec<f64> = (0..b.nrows).map(|r| *b.get(r, c)).collect();
        for _ in 0..2 {
            for u in &q {
                let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > thresh.max(f64::MIN_POSITIVE) {
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
            pivots.push(c);
        }
    }
    pivots
}

/// Result of a block-wise reduction of a whole sparse matrix.
#[derive(Clone, Debug)]
pub struct Factorization<S> {
    pub rank: usize,
    /// Independent columns (global indices, ascending).
    pub pivots: Vec<usize>,
    /// Nullspace basis in global column coordinates.
    pub kernel: Vec<SparseVec<S>>,
}

pub fn factor<S: Solve>(m: &SparseCols<S>, rel_tol: f64) -> Factorization<S> {
    let bl = blocks(m.nrows, &m.cols);
    let dense: Vec<Dense<S>> = bl
        .iter()
        .map(|b| {
            let local: HashMap<usize, usize> = b.rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let mut d = Dense::zeros(b.rows.len(), b.cols.len());
            for (j, &c) in b.cols.iter().enumerate() {
                for (r, v) in &m.cols[c] {
                    d.set(local[r], j, v.clone());
                }
            }
            d
        })
        .collect();
    let reduced = S::reduce_blocks(&dense, rel_tol);
    let mut out = Factorization {
        rank: 0,
        pivots: Vec::new(),
        kernel: Vec::new(),
    };
    for (b, red) in bl.iter().zip(reduced) {
        out.rank += red.rank;
        out.pivots.extend(red.pivots.iter().map(|&p| b.cols[p]));
        for k in red.kernel {
            let mut v: SparseVec<S> = b
                .cols
                .iter()
                .zip(k)
                .filter(|(_, x)| !x.is_zero())
                .map(|(&c, x)| (c, x))
                .collect();
            v.sort_by_key(|e| e.0);
            out.kernel.push(v);
        }
    }
    out.pivots.sort_unstable();
    out
}

pub fn rank<S: Solve>(m: &SparseCols<S>, rel_tol: f64) -> usize {
    factor(m, rel_tol).rank
}

pub fn nullspace<S: Solve>(m: &SparseCols<S>, rel_tol: f64) -> Vec<SparseVec<S>> {
    factor(m, rel_tol).kernel
}

pub fn dot<S: Scalar>(a: &SparseVec<S>, b: &SparseVec<S>) -> S {
    let (mut i, mut j) = (0, 0);
    let mut acc = S::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc + a[i].1.clone() * b[j].1.clone();
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn norm2<S: Scalar>(a: &SparseVec<S>) -> S {
    a.iter().fold(S::zero(), |acc, (_, v)| acc + v.clone() * v.clone())
}

pub fn to_dense<S: Scalar>(a: &SparseVec<S>, len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); len];
    for (i, v) in a {
        out[*i] = v.clone();
    }
    out
}

pub fn to_sparse<S: Scalar>(a: &[S]) -> SparseVec<S> {
    a.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// `a + k b`.
pub fn axpy<S: Scalar>(a: &SparseVec<S>, k: &S, b: &SparseVec<S>) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (idx, v) = if take_a {
            i += 1;
            (a[i - 1].0, a[i - 1].1.clone())
        } else if take_b {
            j += 1;
            (b[j - 1].0, k.clone() * b[j - 1].1.clone())
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, a[i - 1].1.clone() + k.clone() * b[j - 1].1.clone())
        };
        if !v.is_zero() {
            out.push((idx, v));
        }
    }
    out
}

/// Orthonormal basis of the span of `vectors`, computed per connected
/// component of their supports so that homogeneous inputs stay homogeneous.
pub fn orthonormalize(ambient: usize, vectors: &[SparseVec<f64>], rel_tol: f64) -> Vec<SparseVec<f64>> {
    let bl = blocks(ambient, vectors);
    let mut out = Vec::new();
    let smax = vectors.iter().map(|v| norm2(v).sqrt()).fold(0.0f64, f64::max);
    for b in bl {
        let local: HashMap<usize, usize> = b.rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut a = DMatrix::<f64>::zeros(b.rows.len(), b.cols.len());
        for (j, &c) in b.cols.iter().enumerate() {
            for (r, v) in &vectors[c] {
                a[(local[r], j)] = *v;
            }
        }
        if b.rows.is_empty() {
            continue;
        }
        let svd = a.svd(true, false);
        let u = svd.u.expect("left singular vectors");
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s > rel_tol * smax {
                let mut v: SparseVec<f64> = b
                    .rows
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| (r, u[(i, k)]))
                    .filter(|(_, x)| *x != 0.0)
                    .collect();
                v.sort_by_key(|e| e.0);
                out.push(v);
            }
        }
    }
    out
}
