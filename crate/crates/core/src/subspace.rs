//! Linear subspaces of coordinate spaces, with sparse bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Solve, SparseCols, SparseVec, DEFAULT_RANK_TOL};
use crate::q3::ScalarQ3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Exact,
    Float,
}

/// Subspace of `S^ambient_dim` with an independent basis.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient_dim: usize,
    rank_tolerance: f64,
    basis: Vec<SparseVec<S>>,
}

impl<S: Solve> Subspace<S> {
    /// Wrap a basis already known to be independent.
    pub fn from_basis(ambient_dim: usize, basis: Vec<SparseVec<S>>, rank_tolerance: f64) -> Self {
        Subspace {
            ambient_dim,
            rank_tolerance,
            basis,
        }
    }

    /// Span of arbitrary vectors; keeps an independent subset.
    pub fn span(ambient_dim: usize, vectors: Vec<SparseVec<S>>, rank_tolerance: f64) -> Self {
        let m = SparseCols::from_cols(ambient_dim, vectors);
        let f = linalg::factor(&m, rank_tolerance);
        let mut cols = m.cols;
        let basis = f.pivots.iter().map(|&p| std::mem::take(&mut cols[p])).collect();
        Subspace {
            ambient_dim,
            rank_tolerance,
            basis,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            rank_tolerance: DEFAULT_RANK_TOL,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<S>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<SparseVec<S>> {
        self.basis
    }

    pub fn mode(&self) -> Mode {
        if S::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    /// `None` in exact mode.
    pub fn rank_tolerance(&self) -> Option<f64> {
        (!S::EXACT).then_some(self.rank_tolerance)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum_dim(&self, other: &Self) -> Result<usize> {
        self.check_ambient(other)?;
        let cols = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(linalg::rank(
            &SparseCols::from_cols(self.ambient_dim, cols),
            self.rank_tolerance,
        ))
    }

    /// `U ∩ V` from the nullspace of `[U | -V]`.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let k = self.dim();
        let cols = self
            .basis
            .iter()
            .cloned()
            .chain(
                other
                    .basis
                    .iter()
                    .map(|v| v.iter().map(|(i, x)| (*i, -x.clone())).collect()),
            )
            .collect();
        let ker = linalg::nullspace(&SparseCols::from_cols(self.ambient_dim, cols), self.rank_tolerance);
        let vectors = ker
            .into_iter()
            .map(|c| {
                c.iter()
                    .filter(|(i, _)| *i < k)
                    .fold(Vec::new(), |acc, (i, x)| linalg::axpy(&acc, x, &self.basis[*i]))
            })
            .collect();
        Ok(Subspace::span(self.ambient_dim, vectors, self.rank_tolerance))
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        let cols = self.basis.iter().cloned().chain(std::iter::once(v.clone())).collect();
        linalg::rank(&SparseCols::from_cols(self.ambient_dim, cols), self.rank_tolerance) == self.dim()
    }

    pub fn contains_all(&self, vs: &[SparseVec<S>]) -> bool {
        let cols = self.basis.iter().chain(vs).cloned().collect();
        linalg::rank(&SparseCols::from_cols(self.ambient_dim, cols), self.rank_tolerance) == self.dim()
    }

    pub fn to_f64(&self) -> Subspace<f64> {
        Subspace {
            ambient_dim: self.ambient_dim,
            rank_tolerance: if S::EXACT {
                DEFAULT_RANK_TOL
            } else {
                self.rank_tolerance
            },
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|(i, x)| (*i, x.to_f64())).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<Vec<S>> = self
            .basis
            .iter()
            .map(|v| linalg::to_dense(v, self.ambient_dim))
            .collect();
        serde_json::json!({
            "mode": self.mode(),
            "ambient_dim": self.ambient_dim,
            "rank_tolerance": self.rank_tolerance(),
            "dim": self.dim(),
            "basis": basis,
        })
    }
}

impl Subspace<f64> {
    pub fn orthonormal_basis(&self) -> Vec<SparseVec<f64>> {
        linalg::orthonormalize(self.ambient_dim, &self.basis, self.rank_tolerance)
    }

    pub fn with_tolerance(mut self, rank_tolerance: f64) -> Self {
        self.rank_tolerance = rank_tolerance;
        self
    }
}

/// A subspace whose mode is chosen at run time.
#[derive(Clone, Debug)]
pub enum DynSubspace {
    Exact(Subspace<ScalarQ3>),
    Float(Subspace<f64>),
}

impl DynSubspace {
    pub fn mode(&self) -> Mode {
        match self {
            DynSubspace::Exact(_) => Mode::Exact,
            DynSubspace::Float(_) => Mode::Float,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DynSubspace::Exact(s) => s.dim(),
            DynSubspace::Float(s) => s.dim(),
        }
    }

    pub fn sum_dim(&self, other: &Self) -> Result<usize> {
        match (self, other) {
            (DynSubspace::Exact(a), DynSubspace::Exact(b)) => a.sum_dim(b),
            (DynSubspace::Float(a), DynSubspace::Float(b)) => a.sum_dim(b),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (DynSubspace::Exact(a), DynSubspace::Exact(b)) => Ok(DynSubspace::Exact(a.intersection(b)?)),
            (DynSubspace::Float(a), DynSubspace::Float(b)) => Ok(DynSubspace::Float(a.intersection(b)?)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn to_f64(&self) -> Subspace<f64> {
        match self {
            DynSubspace::Exact(s) => s.to_f64(),
            DynSubspace::Float(s) => s.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            DynSubspace::Exact(s) => s.to_json(),
            DynSubspace::Float(s) => s.to_json(),
        }
    }
}
