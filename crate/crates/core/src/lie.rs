//! so(n), its action on tensors, stabilizers, commutants and Casimirs.
//!
//! A skew matrix is stored by its upper-triangular entries `X_ab`, `a < b`,
//! so that `<X, Y> = 1/2 tr(X^T Y)` is the plain dot product and the
//! `E_ab` are orthonormal.  The action on a tensor with lower indices is
//! `(X.T)_{i1..ir} = sum_s sum_m X_{m i_s} T_{i1..m..ir}`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grading::{classes, SignGrading};
use crate::linalg::{self, KeyedCols, Solve, SparseCols, SparseVec};
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use crate::tensor::{pair_count, pair_index, pairs, sort_with_sign, triple_indexer, triples, ThreeForm, UpsilonTensor};

#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<S> {
    n: usize,
    coords: Vec<S>,
}

impl<S: Scalar> SkewMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            n,
            coords: vec![S::zero(); pair_count(n)],
        }
    }

    /// `E_ab = e_a e_b^T - e_b e_a^T`.
    pub fn basis(n: usize, a: usize, b: usize) -> Self {
        let mut x = Self::zeros(n);
        if a < b {
            x.coords[pair_index(n, a, b)] = S::one();
        } else {
            x.coords[pair_index(n, b, a)] = -S::one();
        }
        x
    }

    pub fn from_coords(n: usize, coords: Vec<S>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n),
                found: coords.len(),
            });
        }
        Ok(SkewMatrix { n, coords })
    }

    pub fn from_sparse(n: usize, v: &SparseVec<S>) -> Self {
        SkewMatrix {
            n,
            coords: linalg::to_dense(v, pair_count(n)),
        }
    }

    /// Upper triangle of a dense matrix; the lower triangle is ignored.
    pub fn from_dense(m: &[Vec<S>]) -> Self {
        let n = m.len();
        SkewMatrix {
            n,
            coords: pairs(n).into_iter().map(|(a, b)| m[a][b].clone()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn to_sparse(&self) -> SparseVec<S> {
        linalg::to_sparse(&self.coords)
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coords[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => -self.coords[pair_index(self.n, j, i)].clone(),
            std::cmp::Ordering::Equal => S::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Row `m` lists `(p, X_mp)` over nonzero entries.
    pub fn rows(&self) -> Vec<Vec<(usize, S)>> {
        let mut rows = vec![Vec::new(); self.n];
        for ((a, b), v) in pairs(self.n).into_iter().zip(&self.coords) {
            if !v.is_zero() {
                rows[a].push((b, v.clone()));
                rows[b].push((a, -v.clone()));
            }
        }
        rows
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn norm2(&self) -> S {
        self.coords.iter().fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        SkewMatrix {
            n: self.n,
            coords: self.coords.iter().map(|c| k.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SkewMatrix {
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> SkewMatrix<f64> {
        SkewMatrix {
            n: self.n,
            coords: self.coords.iter().map(|c| c.to_f64()).collect(),
        }
    }
}

/// `[X, Y] = XY - YX`.
pub fn bracket<S: Scalar>(x: &SkewMatrix<S>, y: &SkewMatrix<S>) -> SkewMatrix<S> {
    let n = x.n;
    let (xr, yr) = (x.rows(), y.rows());
    let mut coords = vec![S::zero(); pair_count(n)];
    // (XY)_ab = sum_m X_am Y_mb
    for a in 0..n {
        for (m, xam) in &xr[a] {
            for (b, ymb) in &yr[*m] {
                if a < *b {
                    let i = pair_index(n, a, *b);
                    coords[i] = coords[i].clone() + xam.clone() * ymb.clone();
                }
            }
        }
        for (m, yam) in &yr[a] {
            for (b, xmb) in &xr[*m] {
                if a < *b {
                    let i = pair_index(n, a, *b);
                    coords[i] = coords[i].clone() - yam.clone() * xmb.clone();
                }
            }
        }
    }
    SkewMatrix { n, coords }
}

pub fn so_basis<S: Scalar>(n: usize) -> Vec<SkewMatrix<S>> {
    pairs(n).into_iter().map(|(a, b)| SkewMatrix::basis(n, a, b)).collect()
}

/// `X.Y` on a symmetric 3-tensor, given `X` by rows.
pub fn act_sym3_rows<S: Scalar>(rows: &[Vec<(usize, S)>], u: &UpsilonTensor<S>) -> UpsilonTensor<S> {
    let mut out = UpsilonTensor::zeros(u.n());
    for (t, v) in u.entries() {
        for s in 0..3 {
            if s > 0 && t[s] == t[s - 1] {
                continue;
            }
            let m = t[s] as usize;
            for (p, x) in &rows[m] {
                let mut o = *t;
                o[s] = *p as u8;
                o.sort_unstable();
                let mult = o.iter().filter(|&&i| i as usize == *p).count() as i64;
                out.add_sorted(o, S::from_int(mult) * x.clone() * v.clone());
            }
        }
    }
    out
}

pub fn act_sym3<S: Scalar>(x: &SkewMatrix<S>, u: &UpsilonTensor<S>) -> Result<UpsilonTensor<S>> {
    if x.n != u.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            found: x.n,
        });
    }
    Ok(act_sym3_rows(&x.rows(), u))
}

pub fn act_lambda3_rows<S: Scalar>(rows: &[Vec<(usize, S)>], t: &ThreeForm<S>) -> ThreeForm<S> {
    let mut out = ThreeForm::zeros(t.n());
    for (k, v) in t.entries() {
        for s in 0..3 {
            let m = k[s] as usize;
            for (p, x) in &rows[m] {
                if k.contains(&(*p as u8)) {
                    continue;
                }
                let mut o = *k;
                o[s] = *p as u8;
                out.add(o.map(|i| i as usize), x.clone() * v.clone());
            }
        }
    }
    out
}

pub fn act_lambda3<S: Scalar>(x: &SkewMatrix<S>, t: &ThreeForm<S>) -> Result<ThreeForm<S>> {
    if x.n != t.n() {
        return Err(Error::DimensionMismatch {
            expected: t.n(),
            found: x.n,
        });
    }
    Ok(act_lambda3_rows(&x.rows(), t))
}

/// Matrix of `X -> X.Y` on the `E_ab` basis, rows keyed by sorted triples.
pub fn sym3_action_matrix<S: Scalar>(u: &UpsilonTensor<S>) -> SparseCols<S> {
    let n = u.n();
    let mut kc: KeyedCols<[u8; 3], S> = KeyedCols::new();
    let cols: Vec<UpsilonTensor<S>> = pairs(n)
        .into_par_iter()
        .map(|(a, b)| act_sym3_rows(&SkewMatrix::<S>::basis(n, a, b).rows(), u))
        .collect();
    for c in cols {
        kc.push_col(c.entries().iter().map(|(k, v)| (*k, v.clone())));
    }
    kc.finish().1
}

pub fn stabilizer_sym3<S: Solve>(u: &UpsilonTensor<S>, rank_tol: f64) -> Subspace<S> {
    let m = sym3_action_matrix(u);
    let ker = linalg::nullspace(&m, rank_tol);
    Subspace::from_basis(pair_count(u.n()), ker, rank_tol)
}

pub fn stabilizer_lambda3<S: Solve>(t: &ThreeForm<S>, rank_tol: f64) -> Subspace<S> {
    let n = t.n();
    let mut kc: KeyedCols<[u8; 3], S> = KeyedCols::new();
    for (a, b) in pairs(n) {
        let img = act_lambda3_rows(&SkewMatrix::<S>::basis(n, a, b).rows(), t);
        kc.push_col(img.entries().iter().map(|(k, v)| (*k, v.clone())));
    }
    let (_, m) = kc.finish();
    Subspace::from_basis(pair_count(n), linalg::nullspace(&m, rank_tol), rank_tol)
}

/// Basis of a subspace of so(n) as skew matrices.
pub fn skew_basis<S: Solve>(n: usize, h: &Subspace<S>) -> Vec<SkewMatrix<S>> {
    h.basis().iter().map(|v| SkewMatrix::from_sparse(n, v)).collect()
}

/// `true` iff every bracket of basis elements lies in the span.
pub fn bracket_closure_check<S: Solve>(n: usize, h: &Subspace<S>) -> bool {
    let b = skew_basis(n, h);
    let mut brackets = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let c = bracket(&b[i], &b[j]);
            if !c.is_zero() {
                brackets.push(c.to_sparse());
            }
        }
    }
    h.contains_all(&brackets)
}

/// Dimension of `{T : T X = X T for all X in the basis}` acting on R^n.
pub fn commutant_dim<S: Solve>(n: usize, basis: &[SkewMatrix<S>], rank_tol: f64) -> usize {
    let rows: Vec<Vec<Vec<(usize, S)>>> = basis.iter().map(|x| x.rows()).collect();
    // unknown T_ik at column i*n + k; equation (alpha, i, j):
    // sum_k T_ik X_kj - sum_k X_ik T_kj = 0
    let mut cols: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); n * n];
    let nn = n * n;
    for (alpha, xr) in rows.iter().enumerate() {
        for k in 0..n {
            for (j, xkj) in &xr[k] {
                for i in 0..n {
                    let slot = cols[i * n + k].entry(alpha * nn + i * n + j).or_insert_with(S::zero);
                    *slot = slot.clone() + xkj.clone();
                }
            }
        }
        for i in 0..n {
            for (k, xik) in &xr[i] {
                for j in 0..n {
                    let slot = cols[k * n + j].entry(alpha * nn + i * n + j).or_insert_with(S::zero);
                    *slot = slot.clone() - xik.clone();
                }
            }
        }
    }
    let cols: Vec<SparseVec<S>> = cols
        .into_iter()
        .map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let m = SparseCols::from_cols(basis.len() * nn, cols);
    linalg::nullspace(&m, rank_tol).len()
}

/// A linear so(n)-module with a coordinate basis.
pub trait Representation: Sync {
    fn dim(&self) -> usize;
    /// `rho(X) e_col`, with `X` given by rows.
    fn act(&self, rows: &[Vec<(usize, f64)>], col: usize) -> SparseVec<f64>;
    /// Sign-grading label of a basis vector.
    fn label(&self, col: usize) -> u32;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModuleKind {
    Vector,
    Lambda3,
    Conn,
}

impl ModuleKind {
    pub fn dim(self, n: usize) -> usize {
        match self {
            ModuleKind::Vector => n,
            ModuleKind::Lambda3 => n * (n - 1) * (n - 2) / 6,
            ModuleKind::Conn => pair_count(n) * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModuleKind::Vector => "VECTOR",
            ModuleKind::Lambda3 => "LAMBDA3",
            ModuleKind::Conn => "CONN",
        }
    }
}

/// R^n, Lambda^3 R^n or so(n) (x) R^n in their standard bases.
pub struct TensorModule {
    kind: ModuleKind,
    n: usize,
    grading: SignGrading,
    triples: Vec<[usize; 3]>,
    triple_index: HashMap<[u8; 3], usize>,
    pairs: Vec<(usize, usize)>,
}

impl TensorModule {
    pub fn new(kind: ModuleKind, grading: SignGrading) -> Self {
        let n = grading.n();
        let (triples, triple_index) = if kind == ModuleKind::Lambda3 {
            (triples(n), triple_indexer(n))
        } else {
            (Vec::new(), HashMap::new())
        };
        TensorModule {
            kind,
            n,
            grading,
            triples,
            triple_index,
            pairs: pairs(n),
        }
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Representation for TensorModule {
    fn dim(&self) -> usize {
        self.kind.dim(self.n)
    }

    fn act(&self, rows: &[Vec<(usize, f64)>], col: usize) -> SparseVec<f64> {
        let n = self.n;
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        match self.kind {
            ModuleKind::Vector => {
                for (p, x) in &rows[col] {
                    *acc.entry(*p).or_default() += x;
                }
            }
            ModuleKind::Lambda3 => {
                let t = self.triples[col];
                for s in 0..3 {
                    for (p, x) in &rows[t[s]] {
                        if t.contains(p) {
                            continue;
                        }
                        let mut o = t.map(|i| i as u8);
                        o[s] = *p as u8;
                        let sign = sort_with_sign(&mut o) as f64;
                        *acc.entry(self.triple_index[&o]).or_default() += sign * x;
                    }
                }
            }
            ModuleKind::Conn => {
                let (a, b) = self.pairs[col / n];
                let l = col % n;
                for (p, x) in &rows[a] {
                    if *p < b {
                        *acc.entry(pair_index(n, *p, b) * n + l).or_default() += x;
                    } else if *p > b {
                        *acc.entry(pair_index(n, b, *p) * n + l).or_default() -= x;
                    }
                }
                for (p, x) in &rows[b] {
                    if a < *p {
                        *acc.entry(pair_index(n, a, *p) * n + l).or_default() += x;
                    } else if a > *p {
                        *acc.entry(pair_index(n, *p, a) * n + l).or_default() -= x;
                    }
                }
                for (p, x) in &rows[l] {
                    *acc.entry(pair_index(n, a, b) * n + p).or_default() += x;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| *v != 0.0).collect()
    }

    fn label(&self, col: usize) -> u32 {
        let g = &self.grading;
        match self.kind {
            ModuleKind::Vector => g.char_of(col),
            ModuleKind::Lambda3 => g.char_of_set(&self.triples[col]),
            ModuleKind::Conn => {
                let (a, b) = self.pairs[col / self.n];
                g.char_of_set(&[a, b, col % self.n])
            }
        }
    }
}

/// Label of a skew matrix if all its nonzero entries share one.
pub fn homogeneous_label(g: &SignGrading, x: &SkewMatrix<f64>) -> Option<u32> {
    let mut label = None;
    for ((a, b), v) in pairs(x.n).into_iter().zip(&x.coords) {
        if *v != 0.0 {
            let c = g.char_of(a) ^ g.char_of(b);
            match label {
                None => label = Some(c),
                Some(l) if l != c => return None,
                _ => {}
            }
        }
    }
    Some(label.unwrap_or(0))
}

/// Orthonormal basis of a subalgebra, split so every element is homogeneous.
pub fn orthonormal_skew_basis(n: usize, h: &Subspace<f64>) -> Vec<SkewMatrix<f64>> {
    h.orthonormal_basis()
        .iter()
        .map(|v| SkewMatrix::from_sparse(n, v))
        .collect()
}

#[derive(Clone, Debug)]
pub struct CasimirBlock {
    pub indices: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

/// `C = sum_alpha rho(Y_alpha)^2`, block diagonal along grading labels.
#[derive(Clone, Debug)]
pub struct Casimir {
    pub dim: usize,
    pub blocks: Vec<CasimirBlock>,
    position: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Columns are eigenvectors in block-local coordinates.
    pub vectors: DMatrix<f64>,
}

impl Casimir {
    pub fn apply(&self, v: &SparseVec<f64>) -> SparseVec<f64> {
        let mut by_block: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for (i, x) in v {
            let (b, loc) = self.position[*i];
            by_block.entry(b).or_default().push((loc, *x));
        }
        let mut out = Vec::new();
        for (b, entries) in by_block {
            let blk = &self.blocks[b];
            for r in 0..blk.indices.len() {
                let s: f64 = entries.iter().map(|(c, x)| blk.matrix[(r, *c)] * x).sum();
                if s != 0.0 {
                    out.push((blk.indices[r], s));
                }
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    pub fn eigen(&self) -> Vec<EigenBlock> {
        self.blocks
            .par_iter()
            .map(|b| {
                let sym = (&b.matrix + b.matrix.transpose()) * 0.5;
                let e = SymmetricEigen::new(sym);
                EigenBlock {
                    indices: b.indices.clone(),
                    values: e.eigenvalues.iter().copied().collect(),
                    vectors: e.eigenvectors,
                }
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|b| b.matrix.amax()).fold(0.0, f64::max)
    }

    /// `max_alpha ||[C, rho(Y_alpha)]|| / (||C|| ||rho(Y_alpha)||)`, Frobenius norms
    /// estimated column by column.
    pub fn commutator_residual<R: Representation>(&self, basis: &[SkewMatrix<f64>], rep: &R) -> f64 {
        let cnorm = self
            .blocks
            .iter()
            .map(|b| b.matrix.norm_squared())
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        basis
            .par_iter()
            .map(|y| {
                let rows = y.rows();
                let mut num = 0.0;
                let mut den = 0.0;
                for j in 0..rep.dim() {
                    let ry = rep.act(&rows, j);
                    let a = self.apply(&ry);
                    let ce = self.apply(&vec![(j, 1.0)]);
                    let mut b: SparseVec<f64> = Vec::new();
                    for (i, c) in &ce {
                        b = linalg::axpy(&b, c, &rep.act(&rows, *i));
                    }
                    let d = linalg::axpy(&a, &-1.0, &b);
                    num += linalg::norm2(&d);
                    den += linalg::norm2(&ry);
                }
                num.sqrt() / (den.sqrt().max(f64::MIN_POSITIVE) * cnorm)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Casimir of the span of `basis` (orthonormal) on `rep`.  Falls back to a
/// single block when some basis element is not homogeneous for the labels.
pub fn casimir<R: Representation>(basis: &[SkewMatrix<f64>], rep: &R, grading: &SignGrading) -> Casimir {
    let dim = rep.dim();
    let graded = basis.iter().all(|y| homogeneous_label(grading, y).is_some());
    let labels: Vec<u32> = if graded {
        (0..dim).map(|j| rep.label(j)).collect()
    } else {
        vec![0; dim]
    };
    let cls = classes(&labels);
    let mut position = vec![(0, 0); dim];
    for (b, c) in cls.iter().enumerate() {
        for (loc, &i) in c.iter().enumerate() {
            position[i] = (b, loc);
        }
    }
    let rows: Vec<Vec<Vec<(usize, f64)>>> = basis.iter().map(|y| y.rows()).collect();
    let blocks: Vec<CasimirBlock> = cls
        .par_iter()
        .enumerate()
        .map(|(bid, c)| {
            let mut m = DMatrix::<f64>::zeros(c.len(), c.len());
            for (jl, &j) in c.iter().enumerate() {
                for r in &rows {
                    let once = rep.act(r, j);
                    for (i, x) in &once {
                        for (k, y) in rep.act(r, *i) {
                            let (bk, kl) = position[k];
                            debug_assert_eq!(bk, bid);
                            if bk == bid {
                                m[(kl, jl)] += x * y;
                            }
                        }
                    }
                }
            }
            CasimirBlock {
                indices: c.clone(),
                matrix: m,
            }
        })
        .collect();
    Casimir { dim, blocks, position }
}

/// Sign grading read off the support of a symmetric 3-tensor.
pub fn grading_of_sym3<S: Scalar>(u: &UpsilonTensor<S>) -> SignGrading {
    SignGrading::from_support(u.n(), u.entries().keys().map(|k| k.map(|i| i as usize)))
}

pub fn grading_of_form<S: Scalar>(t: &ThreeForm<S>) -> SignGrading {
    SignGrading::from_support(t.n(), t.entries().keys().map(|k| k.map(|i| i as usize)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q3::ScalarQ3;

    #[test]
    fn basis_sizes() {
        assert_eq!(so_basis::<f64>(5).len(), 10);
        assert_eq!(so_basis::<f64>(26).len(), 325);
    }

    #[test]
    fn so3_relations() {
        let e12 = SkewMatrix::<ScalarQ3>::basis(3, 0, 1);
        let e23 = SkewMatrix::<ScalarQ3>::basis(3, 1, 2);
        let e13 = SkewMatrix::<ScalarQ3>::basis(3, 0, 2);
        let b = bracket(&e12, &e23);
        assert!(b == e13 || b == e13.scale(&ScalarQ3::rational(-1, 1)));
        assert!(bracket(&e12, &e12).is_zero());
    }

    #[test]
    fn bracket_matches_dense_product() {
        let x = SkewMatrix::from_coords(4, vec![1.0, 2.0, -1.0, 0.5, 3.0, -2.0]).unwrap();
        let y = SkewMatrix::from_coords(4, vec![0.0, 1.0, 4.0, -1.0, 2.0, 1.5]).unwrap();
        let (xd, yd) = (x.to_dense(), y.to_dense());
        let mut c = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    c[i][j] += xd[i][k] * yd[k][j] - yd[i][k] * xd[k][j];
                }
            }
        }
        assert_eq!(bracket(&x, &y), SkewMatrix::from_dense(&c));
    }

    #[test]
    fn closure_examples() {
        let line = Subspace::span(3, vec![SkewMatrix::<ScalarQ3>::basis(3, 0, 1).to_sparse()], 0.0);
        assert!(bracket_closure_check(3, &line));
        let two = Subspace::span(
            3,
            vec![
                SkewMatrix::<ScalarQ3>::basis(3, 0, 1).to_sparse(),
                SkewMatrix::<ScalarQ3>::basis(3, 1, 2).to_sparse(),
            ],
            0.0,
        );
        assert!(!bracket_closure_check(3, &two));
    }

    #[test]
    fn stabilizer_of_zero_form_is_everything() {
        let t: ThreeForm<f64> = ThreeForm::zeros(6);
        assert_eq!(stabilizer_lambda3(&t, 1e-8).dim(), 15);
    }

    #[test]
    fn full_algebra_is_irreducible_on_vectors() {
        let b = so_basis::<ScalarQ3>(4);
        assert_eq!(commutant_dim(4, &b, 0.0), 1);
        // a single rotation generator commutes with much more
        assert!(commutant_dim(4, &b[..1], 0.0) > 1);
    }

    #[test]
    fn casimir_of_so_n_on_vectors_is_scalar() {
        let n = 5;
        let basis = so_basis::<f64>(n);
        let rep = TensorModule::new(ModuleKind::Vector, SignGrading::trivial(n));
        let c = casimir(&basis, &rep, &SignGrading::trivial(n));
        let e = c.eigen();
        let vals: Vec<f64> = e.iter().flat_map(|b| b.values.clone()).collect();
        for v in &vals {
            assert!((v + (n as f64 - 1.0)).abs() < 1e-12);
        }
        assert!(c.commutator_residual(&basis, &rep) < 1e-12);
    }

    #[test]
    fn module_actions_are_skew() {
        let n = 5;
        let x = SkewMatrix::from_coords(n, (0..10).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
        let rows = x.rows();
        for kind in [ModuleKind::Vector, ModuleKind::Lambda3, ModuleKind::Conn] {
            let rep = TensorModule::new(kind, SignGrading::trivial(n));
            let d = rep.dim();
            let cols: Vec<Vec<f64>> = (0..d).map(|j| linalg::to_dense(&rep.act(&rows, j), d)).collect();
            for i in 0..d {
                for j in 0..d {
                    assert!((cols[j][i] + cols[i][j]).abs() < 1e-14, "{kind:?}");
                }
            }
        }
    }

    #[test]
    fn lambda3_module_matches_form_action() {
        let n = 5;
        let x = SkewMatrix::from_coords(n, (0..10).map(|i| (i as f64 * 0.91).cos()).collect()).unwrap();
        let rep = TensorModule::new(ModuleKind::Lambda3, SignGrading::trivial(n));
        let t = ThreeForm::from_terms(n, [([0, 2, 4], 1.0)]);
        let col = triple_indexer(n)[&[0u8, 2, 4]];
        let got = linalg::to_dense(&rep.act(&x.rows(), col), 10);
        let want = act_lambda3(&x, &t).unwrap().to_coords();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
