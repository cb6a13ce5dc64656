//! The 2-forms `tau_i`, `sigma_i` and the 3-forms `psi` (on R^8) and `phi`
//! (on R^7), with stabilizer checks and a comparison of `psi` against the
//! 3-form spanning the shared direction of the n = 8 connection space.
//!
//! A 2-form `sum c_ab theta^a ^ theta^b` is stored as the skew matrix with
//! upper entries `c_ab`, so `theta^a ^ theta^b` is `E_ab`.

use nalgebra::{DMatrix, QR};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cubic::upsilon_from_cubic;
use crate::decompose::intersection_by_slices;
use crate::lie::{bracket_closure_check, commutant_dim, skew_basis, stabilizer_lambda3, stabilizer_sym3, SkewMatrix};
use crate::linalg::{self, Solve};
use crate::q3::ScalarQ3;
use crate::subspace::Subspace;
use crate::tensor::{pair_count, pair_index, triples, ThreeForm};

#[derive(Clone, Debug)]
pub struct FormCatalog {
    pub tau: [SkewMatrix<ScalarQ3>; 3],
    pub psi: ThreeForm<ScalarQ3>,
    pub sigma: [SkewMatrix<ScalarQ3>; 3],
    pub phi: ThreeForm<ScalarQ3>,
}

/// 2-form on R^n from 1-based `(a, b, coefficient)` terms in any order.
pub fn two_form(n: usize, terms: &[(usize, usize, ScalarQ3)]) -> SkewMatrix<ScalarQ3> {
    let mut coords = vec![ScalarQ3::zero(); pair_count(n)];
    for (a, b, c) in terms {
        let (a, b) = (a - 1, b - 1);
        let p = pair_index(n, a.min(b), a.max(b));
        coords[p] = coords[p].clone() + if a < b { c.clone() } else { -c.clone() };
    }
    SkewMatrix::from_coords(n, coords).expect("coordinate count")
}

/// `omega ^ theta^l` with `l` 1-based.
fn wedge_theta(t: &mut ThreeForm<ScalarQ3>, omega: &SkewMatrix<ScalarQ3>, l: usize) {
    let n = omega.n();
    for (p, c) in omega.coords().iter().enumerate() {
        if !c.is_zero() {
            let (a, b) = crate::tensor::pairs(n)[p];
            t.add([a, b, l - 1], c.clone());
        }
    }
}

pub fn build_catalog() -> FormCatalog {
    let one = || ScalarQ3::rational(1, 1);
    let r3 = || ScalarQ3::sqrt3_multiple(1, 1);
    let tau = [
        two_form(8, &[(1, 4, one()), (2, 3, one()), (1, 5, r3())]),
        two_form(8, &[(1, 3, one()), (4, 2, one()), (2, 5, r3())]),
        two_form(8, &[(1, 2, one()), (4, 3, ScalarQ3::rational(2, 1))]),
    ];
    let mut psi = ThreeForm::zeros(8);
    for (k, t) in tau.iter().enumerate() {
        wedge_theta(&mut psi, t, 6 + k);
    }
    psi.add([5, 6, 7], one());

    let sigma = [
        two_form(7, &[(1, 3, one()), (4, 2, one())]),
        two_form(7, &[(4, 1, one()), (3, 2, one())]),
        two_form(7, &[(1, 2, one()), (3, 4, one())]),
    ];
    let mut phi = ThreeForm::zeros(7);
    for (k, s) in sigma.iter().enumerate() {
        wedge_theta(&mut phi, s, 5 + k);
    }
    phi.add([4, 5, 6], one());
    FormCatalog { tau, psi, sigma, phi }
}

impl FormCatalog {
    /// `tau_i` as elements of so(5).
    pub fn tau_on_r5(&self) -> Vec<SkewMatrix<ScalarQ3>> {
        self.tau
            .iter()
            .map(|t| {
                let coords = crate::tensor::pairs(5)
                    .into_iter()
                    .map(|(a, b)| t.entry(a, b))
                    .collect();
                SkewMatrix::from_coords(5, coords).expect("coordinate count")
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let two = |s: &SkewMatrix<ScalarQ3>| {
            let n = s.n();
            let entries: Vec<serde_json::Value> = crate::tensor::pairs(n)
                .into_iter()
                .zip(s.coords())
                .filter(|(_, c)| !c.is_zero())
                .map(|((a, b), c)| serde_json::json!({ "index": [a + 1, b + 1], "value": c }))
                .collect();
            serde_json::json!({ "n": n, "entries": entries })
        };
        serde_json::json!({
            "tau": self.tau.iter().map(two).collect::<Vec<_>>(),
            "psi": self.psi.to_json(),
            "sigma": self.sigma.iter().map(two).collect::<Vec<_>>(),
            "phi": self.phi.to_json(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCheck {
    pub name: String,
    pub n: usize,
    pub expected_dim: usize,
    pub dim_float: usize,
    pub dim_exact: Option<usize>,
    pub bracket_closed: bool,
    pub commutant_dim: usize,
    /// `X . form = 0` for every basis element `X`.
    pub annihilates_form: bool,
}

impl StabilizerCheck {
    pub fn passed(&self) -> bool {
        self.dim_float == self.expected_dim
            && self.dim_exact.is_none_or(|d| d == self.expected_dim)
            && self.bracket_closed
            && self.commutant_dim == 1
            && self.annihilates_form
    }
}

fn annihilates<S: Solve>(t: &ThreeForm<S>, h: &Subspace<S>) -> bool {
    skew_basis(t.n(), h).iter().all(|x| {
        crate::lie::act_lambda3(x, t)
            .map(|y| y.entries().values().all(|v| v.negligible(1e-9)))
            .unwrap_or(false)
    })
}

fn stabilizer_check(name: &str, t: &ThreeForm<ScalarQ3>, expected: usize, exact: bool, tol: f64) -> StabilizerCheck {
    let n = t.n();
    let tf = t.to_f64();
    let h = stabilizer_lambda3(&tf, tol);
    let dim_exact = exact.then(|| stabilizer_lambda3(t, 0.0).dim());
    StabilizerCheck {
        name: name.to_string(),
        n,
        expected_dim: expected,
        dim_float: h.dim(),
        dim_exact,
        bracket_closed: bracket_closure_check(n, &h),
        commutant_dim: commutant_dim(n, &skew_basis(n, &h), tol),
        annihilates_form: annihilates(&tf, &h),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FormStabilizerReport {
    pub psi: StabilizerCheck,
    pub phi: StabilizerCheck,
}

impl FormStabilizerReport {
    pub fn passed(&self) -> bool {
        self.psi.passed() && self.phi.passed()
    }
}

/// Stabilizers of `psi` (expected dim 8) and `phi` (expected dim 14);
/// float nullspace at `tol`, with an exact cross-check for `psi`.
pub fn verify_form_stabilizers(tol: f64) -> FormStabilizerReport {
    let cat = build_catalog();
    FormStabilizerReport {
        psi: stabilizer_check("psi", &cat.psi, 8, true, tol),
        phi: stabilizer_check("phi", &cat.phi, 14, false, tol),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TauSpanReport {
    pub span_dim: usize,
    pub bracket_closed: bool,
    pub commutant_dim: usize,
    /// Whether the span coincides with the stabilizer of the n = 5 tensor.
    pub equals_upsilon5_stabilizer: bool,
}

impl TauSpanReport {
    pub fn passed(&self) -> bool {
        self.span_dim == 3 && self.bracket_closed && self.commutant_dim == 1
    }
}

/// Span, bracket closure and irreducibility of `tau_1, tau_2, tau_3` in so(5), exactly.
pub fn verify_tau_span() -> TauSpanReport {
    let taus = build_catalog().tau_on_r5();
    let span: Subspace<ScalarQ3> = Subspace::span(pair_count(5), taus.iter().map(|t| t.to_sparse()).collect(), 0.0);
    let h5 = stabilizer_sym3(&upsilon_from_cubic(5).expect("n = 5"), 0.0);
    let equal = span.dim() == h5.dim() && h5.contains_all(span.basis());
    TauSpanReport {
        span_dim: span.dim(),
        bracket_closed: bracket_closure_check(5, &span),
        commutant_dim: commutant_dim(5, &skew_basis(5, &span), 0.0),
        equals_upsilon5_stabilizer: equal,
    }
}

/// `(R . T)_ijk = R_ia R_jb R_kc T_abc`.
pub fn rotate_form(r: &DMatrix<f64>, t: &ThreeForm<f64>) -> ThreeForm<f64> {
    let n = t.n();
    let terms = triples(n).into_iter().map(|[i, j, k]| {
        let mut s = 0.0;
        for (key, v) in t.entries() {
            let [a, b, c] = key.map(|x| x as usize);
            let m = nalgebra::Matrix3::new(
                r[(i, a)],
                r[(i, b)],
                r[(i, c)],
                r[(j, a)],
                r[(j, b)],
                r[(j, c)],
                r[(k, a)],
                r[(k, b)],
                r[(k, c)],
            );
            s += v * m.determinant();
        }
        ([i, j, k], s)
    });
    ThreeForm::from_terms(n, terms)
}

/// Derivative of [`rotate_form`] at the identity along the skew matrix `x`.
fn rotate_derivative(x: &DMatrix<f64>, t: &ThreeForm<f64>) -> ThreeForm<f64> {
    let n = t.n();
    let terms = triples(n).into_iter().map(|[i, j, k]| {
        let mut s = 0.0;
        for m in 0..n {
            s += x[(i, m)] * t.get(m, j, k) + x[(j, m)] * t.get(i, m, k) + x[(k, m)] * t.get(i, j, m);
        }
        ([i, j, k], s)
    });
    ThreeForm::from_terms(n, terms)
}

fn sub(a: &ThreeForm<f64>, b: &ThreeForm<f64>) -> ThreeForm<f64> {
    let mut out = a.clone();
    for (k, v) in b.entries() {
        out.add(k.map(|x| x as usize), -v);
    }
    out
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameSearch {
    pub found: bool,
    pub best_residual: f64,
    pub sign: i8,
    pub determinant: f64,
    pub starts: usize,
    #[serde(skip)]
    pub rotation: Option<DMatrix<f64>>,
}

/// Search O(n) for `R` with `R . source = +-target` by Riemannian gradient
/// descent from seeded random starts.  `target` is rescaled to the norm of
/// `source`.
pub fn search_frame(source: &ThreeForm<f64>, target: &ThreeForm<f64>, starts: usize, seed: u64) -> FrameSearch {
    let n = source.n();
    let scale = (source.norm2() / target.norm2()).sqrt();
    let norm2 = source.norm2();
    let runs: Vec<(f64, i8, DMatrix<f64>)> = (0..starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let sign: i8 = if s % 2 == 0 { 1 } else { -1 };
            let goal = target.scale(&(scale * sign as f64));
            let mut r = random_orthogonal(n, &mut rng);
            let mut cur = sub(&rotate_form(&r, source), &goal);
            let mut f = cur.norm2();
            let mut step = 0.1;
            for _ in 0..4000 {
                if f < 1e-26 * norm2 || step < 1e-14 {
                    break;
                }
                let rotated = rotate_form(&r, source);
                let mut g = DMatrix::<f64>::zeros(n, n);
                for (a, b) in crate::tensor::pairs(n) {
                    let mut x = DMatrix::<f64>::zeros(n, n);
                    x[(a, b)] = 1.0;
                    x[(b, a)] = -1.0;
                    let d = 2.0 * cur.dot(&rotate_derivative(&x, &rotated));
                    g[(a, b)] = d;
                    g[(b, a)] = -d;
                }
                loop {
                    let half = &g * (-step / 2.0);
                    let id = DMatrix::<f64>::identity(n, n);
                    let cayley = (&id - &half).try_inverse().expect("Cayley transform") * (&id + &half);
                    let cand = &cayley * &r;
                    let next = sub(&rotate_form(&cand, source), &goal);
                    let fnext = next.norm2();
                    if fnext < f {
                        r = cand;
                        cur = next;
                        f = fnext;
                        step *= 1.5;
                        break;
                    }
                    step /= 2.0;
                    if step < 1e-14 {
                        break;
                    }
                }
            }
            ((f / norm2).sqrt(), sign, r)
        })
        .collect();
    let (best, sign, r) = runs
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .expect("at least one start");
    FrameSearch {
        found: best < 1e-8,
        best_residual: best,
        sign,
        determinant: r.determinant(),
        starts,
        rotation: Some(r),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct V1LinkReport {
    pub intersection_dim: usize,
    pub psi_prime: serde_json::Value,
    pub stab_psi_prime_dim: usize,
    pub stab_psi_prime_in_stab_upsilon: bool,
    pub stab_upsilon_in_stab_psi_prime: bool,
    /// `psi'` proportional to `psi` in the determinant frame.
    pub literal_match: bool,
    pub frame_search: FrameSearch,
}

impl V1LinkReport {
    pub fn passed(&self) -> bool {
        self.intersection_dim == 1
            && self.stab_psi_prime_dim == 8
            && self.stab_psi_prime_in_stab_upsilon
            && self.stab_upsilon_in_stab_psi_prime
    }
}

/// Generator of the shared direction for n = 8, read back as a 3-form.
pub fn shared_three_form() -> Vec<ThreeForm<ScalarQ3>> {
    intersection_by_slices(&upsilon_from_cubic(8).expect("n = 8"), 0.0)
}

/// Exact comparison of `psi'` with the tensor stabilizer, plus the frame search.
pub fn verify_v1_link(seed: u64) -> V1LinkReport {
    let shared = shared_three_form();
    let psi = build_catalog().psi;
    let h8 = stabilizer_sym3(&upsilon_from_cubic(8).expect("n = 8"), 0.0);
    let Some(psi_prime) = shared.first() else {
        return V1LinkReport {
            intersection_dim: 0,
            psi_prime: serde_json::Value::Null,
            stab_psi_prime_dim: 0,
            stab_psi_prime_in_stab_upsilon: false,
            stab_upsilon_in_stab_psi_prime: false,
            literal_match: false,
            frame_search: FrameSearch {
                found: false,
                best_residual: f64::INFINITY,
                sign: 0,
                determinant: 0.0,
                starts: 0,
                rotation: None,
            },
        };
    };
    let stab = stabilizer_lambda3(psi_prime, 0.0);
    let pair: Subspace<ScalarQ3> = Subspace::span(
        crate::tensor::triples(8).len(),
        vec![
            linalg::to_sparse(&psi.to_coords()),
            linalg::to_sparse(&psi_prime.to_coords()),
        ],
        0.0,
    );
    V1LinkReport {
        intersection_dim: shared.len(),
        psi_prime: psi_prime.to_json(),
        stab_psi_prime_dim: stab.dim(),
        stab_psi_prime_in_stab_upsilon: h8.contains_all(stab.basis()),
        stab_upsilon_in_stab_psi_prime: stab.contains_all(h8.basis()),
        literal_match: pair.dim() == 1,
        frame_search: search_frame(&psi.to_f64(), &psi_prime.to_f64(), 16, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries() {
        let c = build_catalog();
        let one = ScalarQ3::rational(1, 1);
        assert_eq!(c.psi.get(5, 6, 7), one);
        assert_eq!(c.psi.get(0, 3, 5), one);
        assert_eq!(c.psi.get(1, 2, 5), one);
        assert_eq!(c.psi.get(0, 4, 5), ScalarQ3::sqrt3_multiple(1, 1));
        assert_eq!(c.tau[2].entry(0, 1), one);
        assert_eq!(c.tau[2].entry(2, 3), ScalarQ3::rational(-2, 1));
        assert_eq!(c.phi.get(2, 3, 6), one);
        assert_eq!(c.phi.get(4, 5, 6), one);
    }

    #[test]
    fn rotation_by_identity_and_derivative() {
        let psi = build_catalog().psi.to_f64();
        let id = DMatrix::<f64>::identity(8, 8);
        assert_eq!(rotate_form(&id, &psi), psi);
        let mut x = DMatrix::<f64>::zeros(8, 8);
        x[(0, 3)] = 1.0;
        x[(3, 0)] = -1.0;
        let h = 1e-6;
        let e = (&x * h).exp();
        let fd = sub(&rotate_form(&e, &psi), &psi).scale(&(1.0 / h));
        let an = rotate_derivative(&x, &psi);
        assert!(sub(&fd, &an).norm2().sqrt() < 1e-5);
    }
}
