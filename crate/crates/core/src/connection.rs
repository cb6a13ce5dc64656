//! Split of a connection element into an h-part, a skew-torsion part and
//! the obstruction orthogonal to both.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{embed_lambda3, h_conn_basis, intersection_by_slices, lambda3_conn_basis, read_lambda3};
use crate::error::{Error, Result};
use crate::lie::{orthonormal_skew_basis, stabilizer_sym3};
use crate::linalg::{self, SparseVec, DEFAULT_RANK_TOL};
use crate::subspace::Subspace;
use crate::tensor::{pair_count, ConnElement, ThreeForm, UpsilonTensor};
use crate::upsilon::nearly_integrable_defect;

/// One connected block of the least-squares problem `[A | P B] x = C`.
#[derive(Debug)]
struct SplitBlock {
    rows: Vec<usize>,
    a_cols: usize,
    m: DMatrix<f64>,
    pinv: DMatrix<f64>,
}

/// Precomputed projector data for one tensor.
#[derive(Debug)]
pub struct SplitContext {
    n: usize,
    upsilon: UpsilonTensor<f64>,
    h: Subspace<f64>,
    /// Unit vectors spanning `h (x) R^n ∩ embed(Lambda^3)`.
    shared: Vec<SparseVec<f64>>,
    blocks: Vec<SplitBlock>,
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub gamma: ConnElement<f64>,
    pub torsion: ThreeForm<f64>,
    pub residual: ConnElement<f64>,
    pub ambiguity_dim: usize,
    /// Component of the input along the shared direction (n = 8), assigned to `gamma`.
    pub v1_component: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitNorms {
    pub input: f64,
    pub gamma: f64,
    pub torsion: f64,
    pub residual: f64,
    pub reconstruction_error: f64,
}

/// `(M^T M)^+ M^T` from the eigen-decomposition of the Gram matrix,
/// dropping eigenvalues below `rank_tol^2` relative to the largest.
fn gram_pseudo_inverse(m: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    let gram = m.transpose() * m;
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(*b));
    let mut inv = DMatrix::<f64>::zeros(m.ncols(), m.ncols());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l > rank_tol * rank_tol * lmax.max(1.0) {
            let v = eig.eigenvectors.column(k);
            inv += (v * v.transpose()) / l;
        }
    }
    inv * m.transpose()
}

fn sparse_dot_dense(v: &SparseVec<f64>, x: &[f64]) -> f64 {
    v.iter().map(|(i, a)| a * x[*i]).sum()
}

impl SplitContext {
    pub fn new(u: &UpsilonTensor<f64>, rank_tol: f64) -> Self {
        let h = stabilizer_sym3(u, rank_tol);
        Self::with_stabilizer(u, h, rank_tol)
    }

    pub fn with_stabilizer(u: &UpsilonTensor<f64>, h: Subspace<f64>, rank_tol: f64) -> Self {
        let n = u.n();
        let dim = pair_count(n) * n;
        let ortho: Vec<SparseVec<f64>> = orthonormal_skew_basis(n, &h).iter().map(|y| y.to_sparse()).collect();
        let h_ortho = Subspace::from_basis(pair_count(n), ortho, rank_tol);
        let a = h_conn_basis(&h_ortho, n).into_basis();
        let b = lambda3_conn_basis::<f64>(n, rank_tol).into_basis();
        let shared_raw: Vec<SparseVec<f64>> = intersection_by_slices(u, rank_tol)
            .iter()
            .map(|t| linalg::to_sparse(embed_lambda3(t).comps()))
            .collect();
        let shared = linalg::orthonormalize(dim, &shared_raw, DEFAULT_RANK_TOL);

        let all: Vec<SparseVec<f64>> = a.iter().chain(&b).chain(&shared).cloned().collect();
        let parts = linalg::blocks(dim, &all);
        let na = a.len();
        let nb = b.len();
        let blocks = parts
            .into_par_iter()
            .filter_map(|blk| {
                let a_idx: Vec<usize> = blk.cols.iter().copied().filter(|&c| c < na).collect();
                let b_idx: Vec<usize> = blk.cols.iter().copied().filter(|&c| c >= na && c < na + nb).collect();
                let e_idx: Vec<usize> = blk.cols.iter().copied().filter(|&c| c >= na + nb).collect();
                if a_idx.is_empty() && b_idx.is_empty() {
                    return None;
                }
                let local: HashMap<usize, usize> = blk.rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
                let dense = |v: &SparseVec<f64>| {
                    let mut d = DVector::<f64>::zeros(blk.rows.len());
                    for (r, x) in v {
                        d[local[r]] = *x;
                    }
                    d
                };
                let es: Vec<DVector<f64>> = e_idx.iter().map(|&c| dense(&all[c])).collect();
                let mut m = DMatrix::<f64>::zeros(blk.rows.len(), a_idx.len() + b_idx.len());
                for (j, &c) in a_idx.iter().enumerate() {
                    m.set_column(j, &dense(&all[c]));
                }
                for (j, &c) in b_idx.iter().enumerate() {
                    let mut v = dense(&all[c]);
                    for e in &es {
                        let k = e.dot(&v);
                        v.axpy(-k, e, 1.0);
                    }
                    m.set_column(a_idx.len() + j, &v);
                }
                let pinv = gram_pseudo_inverse(&m, rank_tol);
                Some(SplitBlock {
                    rows: blk.rows,
                    a_cols: a_idx.len(),
                    m,
                    pinv,
                })
            })
            .collect();
        SplitContext {
            n,
            upsilon: u.clone(),
            h,
            shared,
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizer(&self) -> &Subspace<f64> {
        &self.h
    }

    pub fn ambiguity_dim(&self) -> usize {
        self.shared.len()
    }

    /// Unit vectors spanning the shared direction(s).
    pub fn shared_directions(&self) -> &[SparseVec<f64>] {
        &self.shared
    }

    pub fn split(&self, c: &ConnElement<f64>) -> Result<SplitResult> {
        if c.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: c.n(),
            });
        }
        let dim = c.dim();
        let x = c.comps();
        let parts: Vec<(Vec<(usize, f64)>, Vec<(usize, f64)>)> = self
            .blocks
            .par_iter()
            .map(|blk| {
                let rhs = DVector::from_iterator(blk.rows.len(), blk.rows.iter().map(|&r| x[r]));
                let coef = &blk.pinv * rhs;
                let mut ca = coef.clone();
                ca.rows_mut(blk.a_cols, coef.len() - blk.a_cols).fill(0.0);
                let mut cb = coef;
                cb.rows_mut(0, blk.a_cols).fill(0.0);
                let ga = &blk.m * ca;
                let gb = &blk.m * cb;
                (
                    blk.rows.iter().copied().zip(ga.iter().copied()).collect(),
                    blk.rows.iter().copied().zip(gb.iter().copied()).collect(),
                )
            })
            .collect();
        let mut gamma = vec![0.0; dim];
        let mut half_t = vec![0.0; dim];
        for (ga, gb) in parts {
            for (r, v) in ga {
                gamma[r] += v;
            }
            for (r, v) in gb {
                half_t[r] += v;
            }
        }
        let residual: Vec<f64> = (0..dim).map(|i| x[i] - gamma[i] - half_t[i]).collect();
        let half_t = ConnElement::from_comps(self.n, half_t)?;
        let torsion = read_lambda3(&half_t).scale(&2.0);
        let v1_component = (!self.shared.is_empty()).then(|| sparse_dot_dense(&self.shared[0], x));
        Ok(SplitResult {
            gamma: ConnElement::from_comps(self.n, gamma)?,
            torsion,
            residual: ConnElement::from_comps(self.n, residual)?,
            ambiguity_dim: self.shared.len(),
            v1_component,
        })
    }

    /// Residual below `tol` and, when present, the shared component too.
    pub fn admits_characteristic(&self, c: &ConnElement<f64>, tol: f64) -> Result<bool> {
        let s = self.split(c)?;
        let shared_ok = self.shared.iter().all(|e| sparse_dot_dense(e, c.comps()).abs() < tol);
        Ok(s.residual.norm2().sqrt() < tol && shared_ok)
    }

    /// Norm of the nearly-integrable defect of `c`.
    pub fn defect_norm(&self, c: &ConnElement<f64>) -> Result<f64> {
        Ok(nearly_integrable_defect(c, &self.upsilon)?.norm2().sqrt())
    }
}

impl SplitResult {
    /// `gamma + 1/2 embed(torsion) + residual`.
    pub fn reconstruct(&self) -> ConnElement<f64> {
        self.gamma
            .add(&embed_lambda3(&self.torsion).scale(&0.5))
            .add(&self.residual)
    }

    pub fn norms(&self, input: &ConnElement<f64>) -> SplitNorms {
        SplitNorms {
            input: input.norm2().sqrt(),
            gamma: self.gamma.norm2().sqrt(),
            torsion: self.torsion.norm2().sqrt(),
            residual: self.residual.norm2().sqrt(),
            reconstruction_error: self.reconstruct().sub(input).norm2().sqrt(),
        }
    }

    pub fn to_json(&self, input: &ConnElement<f64>) -> serde_json::Value {
        let mut v = serde_json::json!({
            "n": self.gamma.n(),
            "gamma": self.gamma.to_json(),
            "torsion": self.torsion.to_json(),
            "residual": self.residual.to_json(),
            "ambiguity_dim": self.ambiguity_dim,
            "norms": self.norms(input),
        });
        if let Some(x) = self.v1_component {
            v["v1_component"] = serde_json::json!(x);
            v["v1_convention"] = serde_json::json!("assigned to gamma");
        }
        v
    }
}
