//! Level sets of `F(a) = Y_ijk a_i a_j a_k` in the unit sphere and their
//! principal curvatures.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cubic::PointVec;
use crate::decompose::cluster;
use crate::error::{Error, Result};
use crate::tensor::UpsilonTensor;

pub const MAX_NEWTON_STEPS: usize = 100;
pub const NEWTON_TOL: f64 = 1e-12;

/// Dense copy of the cubic tensor for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CubicField {
    n: usize,
    t: Vec<f64>,
}

impl CubicField {
    pub fn new(u: &UpsilonTensor<f64>) -> Self {
        let n = u.n();
        let mut t = vec![0.0; n * n * n];
        for (k, v) in u.entries() {
            let [i, j, l] = k.map(|x| x as usize);
            for [p, q, r] in [[i, j, l], [i, l, j], [j, i, l], [j, l, i], [l, i, j], [l, j, i]] {
                t[(p * n + q) * n + r] = *v;
            }
        }
        CubicField { n, t }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Y_ijk a_k` as an n x n matrix.
    fn contract(&self, a: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            let row = &self.t[(i * n + j) * n..(i * n + j + 1) * n];
            row.iter().zip(a).map(|(x, y)| x * y).sum()
        })
    }

    pub fn value(&self, a: &[f64]) -> f64 {
        let v = DVector::from_column_slice(a);
        (self.contract(a) * &v).dot(&v)
    }

    /// `3 Y_ijk a_j a_k`.
    pub fn gradient(&self, a: &[f64]) -> DVector<f64> {
        self.contract(a) * DVector::from_column_slice(a) * 3.0
    }

    /// `6 Y_ijk a_k`.
    pub fn hessian(&self, a: &[f64]) -> DMatrix<f64> {
        self.contract(a) * 6.0
    }

    /// Projection of the gradient onto the tangent space of the sphere at a unit `a`.
    pub fn spherical_gradient(&self, a: &[f64]) -> DVector<f64> {
        let g = self.gradient(a);
        let v = DVector::from_column_slice(a);
        let k = g.dot(&v);
        g - v * k
    }
}

fn check_level(c: f64) -> Result<()> {
    if !(c.abs() < 1.0) {
        return Err(Error::InvalidLevel(c));
    }
    Ok(())
}

fn normalize(v: DVector<f64>) -> DVector<f64> {
    let r = v.norm();
    v / r
}

/// Project a unit vector onto `F = c` inside the sphere.
pub fn newton_project(f: &CubicField, start: &[f64], c: f64, index: usize) -> Result<PointVec<f64>> {
    let mut a = normalize(DVector::from_column_slice(start));
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON_STEPS {
        residual = f.value(a.as_slice()) - c;
        if residual.abs() < NEWTON_TOL {
            return Ok(PointVec::new(a.as_slice().to_vec()));
        }
        let g = f.spherical_gradient(a.as_slice());
        let g2 = g.norm_squared();
        if g2 < 1e-24 {
            break;
        }
        a = normalize(a - g * (residual / g2));
    }
    Err(Error::Nonconvergence {
        index,
        iterations: MAX_NEWTON_STEPS,
        residual: residual.abs(),
    })
}

/// `count` points of `S^{n-1} ∩ {F = c}`; point `i` uses the ChaCha stream `i` of `seed`.
pub fn sample_level_set(u: &UpsilonTensor<f64>, c: f64, count: usize, seed: u64) -> Result<Vec<PointVec<f64>>> {
    check_level(c)?;
    let f = CubicField::new(u);
    let n = u.n();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let start: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            newton_project(&f, &start, c, i)
        })
        .collect()
}

/// Orthonormal basis of the complement of `{a, nu}`, built from the
/// coordinate vectors in order.
pub fn tangent_frame(a: &DVector<f64>, nu: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = a.len();
    let mut frame: Vec<DVector<f64>> = vec![a.clone(), nu.clone()];
    for i in 0..n {
        if frame.len() == n {
            break;
        }
        let mut v = DVector::<f64>::zeros(n);
        v[i] = 1.0;
        for _ in 0..2 {
            for w in &frame {
                let k = w.dot(&v);
                v.axpy(-k, w, 1.0);
            }
        }
        if v.norm() > 1e-3 {
            frame.push(normalize(v));
        }
    }
    frame.split_off(2)
}

/// Shape operator in a given orthonormal tangent frame.
pub fn shape_operator_in_frame(f: &CubicField, a: &[f64], frame: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let g = f.spherical_gradient(a);
    let gn = g.norm();
    if gn < 1e-10 {
        return Err(Error::SingularPoint(gn));
    }
    let h = f.hessian(a);
    let c = f.value(a);
    let k = frame.len();
    let mut m = DMatrix::from_fn(k, k, |i, j| {
        let corr = if i == j { 3.0 * c } else { 0.0 };
        ((&h * &frame[j]).dot(&frame[i]) - corr) / gn
    });
    m = (&m + m.transpose()) * 0.5;
    Ok(m)
}

/// Shape operator of `S = S^{n-1} ∩ {F = F(a)}` at unit `a` with respect to
/// the unit spherical gradient.
pub fn shape_operator(u: &UpsilonTensor<f64>, a: &PointVec<f64>) -> Result<DMatrix<f64>> {
    if a.n() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            found: a.n(),
        });
    }
    let f = CubicField::new(u);
    shape_operator_at(&f, &a.a)
}

fn shape_operator_at(f: &CubicField, a: &[f64]) -> Result<DMatrix<f64>> {
    let g = f.spherical_gradient(a);
    let gn = g.norm();
    if gn < 1e-10 {
        return Err(Error::SingularPoint(gn));
    }
    let frame = tangent_frame(&DVector::from_column_slice(a), &(g / gn));
    shape_operator_in_frame(f, a, &frame)
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub within_point_spread: f64,
    pub across_point_spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplePoint {
    pub a: Vec<f64>,
    pub curvatures: Vec<f64>,
    pub gradient_norm2: f64,
    pub spherical_gradient_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub n: usize,
    pub level: f64,
    pub sample_count: usize,
    pub tolerance: f64,
    pub clusters: Vec<CurvatureCluster>,
    pub expected_multiplicity: usize,
    pub min_gap: f64,
    pub max_eikonal_error: f64,
    pub min_spherical_gradient: f64,
    /// Failure descriptions; empty when everything holds.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub samples: Vec<SamplePoint>,
}

impl CurvatureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["passed"] = serde_json::json!(self.passed());
        v
    }

    /// One row per sample: index, coordinates, principal curvatures.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let n = self.n;
        let mut header = vec!["index".to_string()];
        header.extend((1..=n).map(|i| format!("a{i}")));
        header.extend((1..=n - 2).map(|i| format!("k{i}")));
        w.write_record(&header).map_err(|e| Error::Invalid(e.to_string()))?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(s.a.iter().chain(&s.curvatures).map(|x| format!("{x:.17e}")));
            w.write_record(&row).map_err(|e| Error::Invalid(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf8"))
    }
}

/// Sample `samples` points of the level `c`, compute principal curvatures
/// and check that they form three constant clusters of equal multiplicity.
pub fn verify_isoparametric(
    u: &UpsilonTensor<f64>,
    c: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CurvatureReport> {
    let n = u.n();
    let points = sample_level_set(u, c, samples, seed)?;
    let f = CubicField::new(u);
    let data: Vec<SamplePoint> = points
        .par_iter()
        .map(|p| {
            let m = shape_operator_at(&f, &p.a)?;
            Ok(SamplePoint {
                a: p.a.clone(),
                curvatures: sorted_eigenvalues(&m),
                gradient_norm2: f.gradient(&p.a).norm_squared(),
                spherical_gradient_norm: f.spherical_gradient(&p.a).norm(),
            })
        })
        .collect::<Result<_>>()?;

    let pooled: Vec<f64> = data.iter().flat_map(|s| s.curvatures.iter().copied()).collect();
    let raw = cluster(&pooled, 100.0 * tol);
    let mut failures = Vec::new();
    let expected_multiplicity = (n - 2) / 3;
    let mut clusters = Vec::new();
    for &(lo, hi, count, sum) in &raw {
        let mut per_point = Vec::with_capacity(data.len());
        let mut within = 0.0f64;
        let mut counts_ok = true;
        for s in &data {
            let vals: Vec<f64> = s.curvatures.iter().copied().filter(|x| *x >= lo && *x <= hi).collect();
            if vals.is_empty() {
                counts_ok = false;
                continue;
            }
            let mx = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mn = vals.iter().copied().fold(f64::INFINITY, f64::min);
            within = within.max(mx - mn);
            per_point.push(vals.iter().sum::<f64>() / vals.len() as f64);
            counts_ok &= vals.len() * data.len() == count;
        }
        let across = per_point.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - per_point.iter().copied().fold(f64::INFINITY, f64::min);
        let multiplicity = count / data.len().max(1);
        if !counts_ok {
            failures.push(format!(
                "cluster near {:.6} has unequal counts across points",
                sum / count as f64
            ));
        }
        clusters.push(CurvatureCluster {
            value: sum / count as f64,
            multiplicity,
            within_point_spread: within,
            across_point_spread: across,
        });
    }
    if clusters.len() != 3 {
        failures.push(format!("expected 3 curvature clusters, found {}", clusters.len()));
    }
    for cl in &clusters {
        if cl.multiplicity != expected_multiplicity {
            failures.push(format!("cluster {:.6} has multiplicity {}", cl.value, cl.multiplicity));
        }
        if cl.within_point_spread >= tol || cl.across_point_spread >= tol {
            failures.push(format!(
                "cluster {:.6} spread {:e} / {:e}",
                cl.value, cl.within_point_spread, cl.across_point_spread
            ));
        }
    }
    let min_gap = clusters
        .windows(2)
        .map(|w| w[1].value - w[0].value)
        .fold(f64::INFINITY, f64::min);
    let max_eikonal_error = data.iter().map(|s| (s.gradient_norm2 - 9.0).abs()).fold(0.0, f64::max);
    if max_eikonal_error > 1e-12 {
        failures.push(format!("|grad F|^2 deviates from 9 by {max_eikonal_error:e}"));
    }
    let min_spherical_gradient = data
        .iter()
        .map(|s| s.spherical_gradient_norm)
        .fold(f64::INFINITY, f64::min);
    Ok(CurvatureReport {
        n,
        level: c,
        sample_count: data.len(),
        tolerance: tol,
        clusters,
        expected_multiplicity,
        min_gap,
        max_eikonal_error,
        min_spherical_gradient,
        failures,
        samples: data,
    })
}
