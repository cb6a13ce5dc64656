//! Identities of the cubic tensor and the nearly-integrable defect map.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{act_sym3_rows, SkewMatrix};
use crate::linalg::{self, KeyedCols, Solve, SparseCols};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::tensor::{pairs, ConnElement, Sym4Tensor, UpsilonTensor};

/// `F(a) = Y_ijk a_i a_j a_k`.
pub fn evaluate_cubic<S: Scalar>(u: &UpsilonTensor<S>, a: &[S]) -> Result<S> {
    if a.len() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            found: a.len(),
        });
    }
    Ok(u.entries().iter().fold(S::zero(), |acc, (k, v)| {
        let m = crate::scalar::multinomial(k);
        acc + S::from_int(m)
            * v.clone()
            * a[k[0] as usize].clone()
            * a[k[1] as usize].clone()
            * a[k[2] as usize].clone()
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub passed: bool,
    pub elapsed_ms: f64,
}

fn timed<F: FnOnce() -> bool>(f: F) -> Check {
    let t = Instant::now();
    let passed = f();
    Check {
        passed,
        elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub symmetric: Check,
    pub trace_free: Check,
    pub identity_iii: Check,
    pub harmonic: Check,
    pub eikonal: Check,
}

impl IdentityReport {
    pub fn checks(&self) -> [(&'static str, &Check); 5] {
        [
            ("symmetric", &self.symmetric),
            ("trace_free", &self.trace_free),
            ("identity_iii", &self.identity_iii),
            ("harmonic", &self.harmonic),
            ("eikonal", &self.eikonal),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    /// Elapsed times are included only on request, so that repeated runs
    /// produce identical output.
    pub fn to_json(&self, timings: bool) -> serde_json::Value {
        let mut checks = serde_json::Map::new();
        for (name, c) in self.checks() {
            let mut o = serde_json::json!({ "passed": c.passed });
            if timings {
                o["elapsed_ms"] = serde_json::json!(c.elapsed_ms);
            }
            checks.insert(name.to_string(), o);
        }
        serde_json::json!({
            "n": self.n,
            "all_passed": self.all_passed(),
            "checks": checks,
        })
    }
}

fn kron(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Left-hand side of identity iii) at `(j, k, l, m)`:
/// `Y_jki Y_lmi + Y_lji Y_kmi + Y_kli Y_jmi`.
pub fn identity_iii_lhs<S: Scalar>(adj: &[Vec<(usize, S)>], n: usize, [j, k, l, m]: [usize; 4]) -> S {
    let d = |a: usize, b: usize, c: usize, e: usize| linalg::dot(&adj[a * n + b], &adj[c * n + e]);
    d(j, k, l, m) + d(l, j, k, m) + d(k, l, j, m)
}

pub fn identity_iii_rhs(j: usize, k: usize, l: usize, m: usize) -> i64 {
    kron(j, k) * kron(l, m) + kron(l, j) * kron(k, m) + kron(k, l) * kron(j, m)
}

/// Zero test: exact for exact scalars, `|x| <= 1e-10` for floats.
fn vanishes<S: Scalar>(x: &S) -> bool {
    x.negligible(1e-10)
}

/// The five checks; exact when `S` is exact.
pub fn verify_identities<S: Scalar>(u: &UpsilonTensor<S>) -> IdentityReport {
    let n = u.n();
    let symmetric = timed(|| {
        u.entries()
            .keys()
            .all(|k| k[0] <= k[1] && k[1] <= k[2] && (k[2] as usize) < n)
    });
    let trace_free = timed(|| {
        (0..n).all(|i| {
            let s = (0..n).fold(S::zero(), |acc, j| acc + u.get(i, j, j));
            vanishes(&s)
        })
    });
    let identity_iii = timed(|| {
        let adj = u.adjacency();
        let mut quads = Vec::new();
        for j in 0..n {
            for k in j..n {
                for l in k..n {
                    for m in l..n {
                        quads.push([j, k, l, m]);
                    }
                }
            }
        }
        quads.par_iter().all(|&q| {
            let lhs = identity_iii_lhs(&adj, n, q);
            let [j, k, l, m] = q;
            vanishes(&(lhs - S::from_int(identity_iii_rhs(j, k, l, m))))
        })
    });
    let f = u.cubic_polynomial();
    let harmonic = timed(|| {
        let lap = (0..n).fold(Poly::<S>::constant(S::zero()), |acc, i| {
            acc + f.derivative(i).derivative(i)
        });
        let ok = lap.terms().all(|(_, c)| vanishes(c));
        ok
    });
    let eikonal = timed(|| {
        let grad2 = (0..n).fold(Poly::<S>::constant(S::zero()), |acc, i| {
            let g = f.derivative(i);
            acc + g.clone() * g
        });
        let r2 = (0..n).fold(Poly::<S>::constant(S::zero()), |acc, i| {
            acc + Poly::var(i) * Poly::var(i)
        });
        let diff = grad2 - (r2.clone() * r2).scale(&S::from_int(9));
        let ok = diff.terms().all(|(_, c)| vanishes(c));
        ok
    });
    IdentityReport {
        n,
        symmetric,
        trace_free,
        identity_iii,
        harmonic,
        eikonal,
    }
}

fn sorted4(l: usize, t: &[u8; 3]) -> [u8; 4] {
    let mut q = [l as u8, t[0], t[1], t[2]];
    q.sort_unstable();
    q
}

/// Pointwise model of `nabla_X Y(X, X, X)`: the full symmetrization of
/// `D_lijk = (C_l . Y)_ijk`, where `C_l` is the skew slice at frame `l`.
pub fn nearly_integrable_defect<S: Scalar>(c: &ConnElement<S>, u: &UpsilonTensor<S>) -> Result<Sym4Tensor<S>> {
    let n = u.n();
    if c.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.n(),
        });
    }
    let quarter = S::from_ratio(1, 4);
    let mut out = Sym4Tensor::zeros(n);
    for l in 0..n {
        let x = SkewMatrix::from_coords(n, c.slice(l)).expect("slice length");
        if x.is_zero() {
            continue;
        }
        let phi = act_sym3_rows(&x.rows(), u);
        for (t, v) in phi.entries() {
            let q = sorted4(l, t);
            let mult = q.iter().filter(|&&i| i as usize == l).count() as i64;
            out.add_sorted(q, quarter.clone() * S::from_int(mult) * v.clone());
        }
    }
    Ok(out)
}

/// Matrix of the defect map on the basis `E_ab (x) e_l` (column
/// `pair * n + l`), rows keyed by sorted quadruples.
pub fn defect_matrix<S: Scalar>(u: &UpsilonTensor<S>) -> (Vec<[u8; 4]>, SparseCols<S>) {
    let n = u.n();
    let quarter = S::from_ratio(1, 4);
    let phis: Vec<UpsilonTensor<S>> = pairs(n)
        .into_par_iter()
        .map(|(a, b)| act_sym3_rows(&SkewMatrix::<S>::basis(n, a, b).rows(), u))
        .collect();
    let mut kc: KeyedCols<[u8; 4], S> = KeyedCols::new();
    for phi in &phis {
        for l in 0..n {
            kc.push_col(phi.entries().iter().map(|(t, v)| {
                let q = sorted4(l, t);
                let mult = q.iter().filter(|&&i| i as usize == l).count() as i64;
                (q, quarter.clone() * S::from_int(mult) * v.clone())
            }));
        }
    }
    kc.finish()
}

/// Dimension of the kernel of the defect map on so(n) (x) R^n.
pub fn nearly_integrable_kernel_dim<S: Solve>(u: &UpsilonTensor<S>, rank_tol: f64) -> usize {
    let (_, m) = defect_matrix(u);
    m.ncols() - linalg::rank(&m, rank_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::upsilon_from_cubic;
    use crate::q3::ScalarQ3;

    #[test]
    fn evaluate_examples() {
        let u = upsilon_from_cubic(5).unwrap();
        let z = ScalarQ3::rational(0, 1);
        let one = ScalarQ3::rational(1, 1);
        let mut a = vec![z.clone(); 5];
        assert_eq!(evaluate_cubic(&u, &a).unwrap(), z);
        a[4] = one.clone();
        assert_eq!(evaluate_cubic(&u, &a).unwrap(), ScalarQ3::rational(-1, 1));
        let mut a = vec![z.clone(); 5];
        a[2] = one;
        assert_eq!(evaluate_cubic(&u, &a).unwrap(), z);
        assert!(evaluate_cubic(&u, &a[..4]).is_err());
    }

    #[test]
    fn identities_n5() {
        let r = verify_identities(&upsilon_from_cubic(5).unwrap());
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn defect_of_basis_element_is_nonzero() {
        let u = upsilon_from_cubic(5).unwrap();
        let mut c = ConnElement::zeros(5);
        c.set(0, 1, 0, ScalarQ3::rational(1, 1));
        assert!(!nearly_integrable_defect(&c, &u).unwrap().is_zero());
    }

    #[test]
    fn matrix_agrees_with_direct_defect() {
        let u = upsilon_from_cubic(5).unwrap().to_f64();
        let (keys, m) = defect_matrix(&u);
        let x: Vec<f64> = (0..50).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let y = m.apply(&x);
        let c = ConnElement::from_comps(5, x).unwrap();
        let d = nearly_integrable_defect(&c, &u).unwrap();
        for (k, v) in keys.iter().zip(&y) {
            assert!((d.value(k.map(|i| i as usize)) - v).abs() < 1e-12);
        }
    }
}
