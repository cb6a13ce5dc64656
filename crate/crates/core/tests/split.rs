use hkgeom::connection::SplitContext;
use hkgeom::cubic::upsilon_from_cubic;
use hkgeom::decompose::{embed_lambda3, h_conn_basis, lambda3_conn_basis};
use hkgeom::linalg::{self, SparseVec, DEFAULT_RANK_TOL};
use hkgeom::tensor::{pair_count, triples};
use hkgeom::{ConnElement, ThreeForm};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn context(n: usize) -> SplitContext {
    SplitContext::new(&upsilon_from_cubic(n).unwrap().to_f64(), DEFAULT_RANK_TOL)
}

fn spanning_columns(ctx: &SplitContext) -> (Vec<SparseVec<f64>>, Vec<SparseVec<f64>>) {
    let n = ctx.n();
    let a = h_conn_basis(ctx.stabilizer(), n).into_basis();
    let b = lambda3_conn_basis::<f64>(n, DEFAULT_RANK_TOL).into_basis();
    (a, b)
}

fn random_conn(rng: &mut ChaCha8Rng, n: usize) -> ConnElement<f64> {
    let dim = pair_count(n) * n;
    ConnElement::from_comps(n, (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> ThreeForm<f64> {
    let coords: Vec<f64> = triples(n).iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    ThreeForm::from_coords(n, &coords)
}

fn combination(rng: &mut ChaCha8Rng, dim: usize, cols: &[SparseVec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for c in cols {
        let k = rng.random_range(-1.0..1.0);
        for (i, v) in c {
            out[*i] += k * v;
        }
    }
    out
}

#[test]
fn matches_dense_least_squares_n5() {
    let ctx = context(5);
    let (a, b) = spanning_columns(&ctx);
    let dim = pair_count(5) * 5;
    let cols: Vec<DVector<f64>> = a
        .iter()
        .chain(&b)
        .map(|c| DVector::from_vec(linalg::to_dense(c, dim)))
        .collect();
    let m = DMatrix::from_columns(&cols);
    let svd = m.clone().svd(true, true);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let c = random_conn(&mut rng, 5);
        let rhs = DVector::from_column_slice(c.comps());
        let x = svd.solve(&rhs, 1e-10).unwrap();
        let mut xa = x.clone();
        xa.rows_mut(a.len(), b.len()).fill(0.0);
        let gamma = &m * xa;
        let fit = &m * &x;
        let s = ctx.split(&c).unwrap();
        for i in 0..dim {
            assert!((s.gamma.comps()[i] - gamma[i]).abs() < 1e-10);
            assert!((s.residual.comps()[i] - (rhs[i] - fit[i])).abs() < 1e-10);
        }
    }
}

#[test]
fn admitted_inputs_have_vanishing_defect() {
    for n in [5usize, 8] {
        let ctx = context(n);
        let (a, b) = spanning_columns(&ctx);
        let dim = pair_count(n) * n;
        let mut rng = ChaCha8Rng::seed_from_u64(43 + n as u64);
        for _ in 0..100 {
            let mut comps = combination(&mut rng, dim, &a);
            let t = combination(&mut rng, dim, &b);
            for (x, y) in comps.iter_mut().zip(&t) {
                *x += y;
            }
            let mut c = ConnElement::from_comps(n, comps).unwrap();
            for e in ctx.shared_directions() {
                let k = linalg::dot(&linalg::to_sparse(c.comps()), e);
                c = c.sub(&ConnElement::from_comps(n, linalg::to_dense(e, dim)).unwrap().scale(&k));
            }
            assert!(ctx.defect_norm(&c).unwrap() < 1e-9);
            assert!(ctx.admits_characteristic(&c, 1e-9).unwrap());
        }
    }
}

#[test]
fn injected_residual_is_rejected() {
    let ctx = context(5);
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let r = ctx.split(&random_conn(&mut rng, 5)).unwrap().residual;
    let unit = r.scale(&(1.0 / r.norm2().sqrt()));
    let t = random_form(&mut rng, 5);
    let base = embed_lambda3(&t).scale(&0.5);
    assert!(ctx.admits_characteristic(&base, 1e-9).unwrap());
    let bumped = base.add(&unit.scale(&1e-4));
    assert!(!ctx.admits_characteristic(&bumped, 1e-9).unwrap());
    assert!(ctx.defect_norm(&bumped).unwrap() > 1e-8);
}

#[test]
fn shared_direction_in_dimension_eight() {
    let ctx = context(8);
    assert_eq!(ctx.ambiguity_dim(), 1);
    let dim = pair_count(8) * 8;
    let e = ConnElement::from_comps(8, linalg::to_dense(&ctx.shared_directions()[0], dim)).unwrap();
    let s = ctx.split(&e).unwrap();
    // the convention puts the whole shared component into gamma
    assert!(s.gamma.sub(&e).norm2().sqrt() < 1e-10);
    assert!(s.torsion.norm2().sqrt() < 1e-10);
    assert!((s.v1_component.unwrap() - 1.0).abs() < 1e-10);
    assert!(!ctx.admits_characteristic(&e, 1e-9).unwrap());
    assert!(ctx.defect_norm(&e).unwrap() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reconstruction_and_orthogonality(seed in any::<u64>(), k in 0usize..2) {
        let n = [5, 8][k];
        let ctx = context(n);
        let (a, b) = spanning_columns(&ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_conn(&mut rng, n);
        let s = ctx.split(&c).unwrap();
        prop_assert!(s.norms(&c).reconstruction_error < 1e-10);
        let r = linalg::to_sparse(s.residual.comps());
        for v in a.iter().chain(&b) {
            prop_assert!(linalg::dot(&r, v).abs() < 1e-10);
        }
    }

    #[test]
    fn split_is_idempotent(seed in any::<u64>(), k in 0usize..2) {
        let n = [5, 8][k];
        let ctx = context(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = ctx.split(&random_conn(&mut rng, n)).unwrap();
        let g = ctx.split(&s.gamma).unwrap();
        prop_assert!(g.gamma.sub(&s.gamma).norm2().sqrt() < 1e-10);
        prop_assert!(g.torsion.norm2().sqrt() < 1e-10);
        let r = ctx.split(&s.residual).unwrap();
        prop_assert!(r.residual.sub(&s.residual).norm2().sqrt() < 1e-10);
    }

    #[test]
    fn unique_split_recovers_its_parts(seed in any::<u64>()) {
        let ctx = context(5);
        let (a, _) = spanning_columns(&ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = ConnElement::from_comps(5, combination(&mut rng, 50, &a)).unwrap();
        let t = random_form(&mut rng, 5);
        let c = gamma.add(&embed_lambda3(&t).scale(&0.5));
        let s = ctx.split(&c).unwrap();
        prop_assert!(s.gamma.sub(&gamma).norm2().sqrt() < 1e-10);
        let diff: f64 = t.to_coords().iter().zip(s.torsion.to_coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
        prop_assert!(s.residual.norm2().sqrt() < 1e-10);
    }

    #[test]
    fn defect_is_linear(seed in any::<u64>(), k in 0usize..3) {
        let n = [5, 8, 14][k];
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_conn(&mut rng, n);
        let y = random_conn(&mut rng, n);
        let (p, q) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let d = |c: &ConnElement<f64>| hkgeom::upsilon::nearly_integrable_defect(c, &u).unwrap();
        let lhs = d(&x.scale(&p).add(&y.scale(&q)));
        let (dx, dy) = (d(&x), d(&y));
        let mut rhs = dx.scale(&p);
        for (key, v) in dy.entries() {
            rhs.add_sorted(*key, q * v);
        }
        let mut diff = lhs;
        for (key, v) in rhs.entries() {
            diff.add_sorted(*key, -v);
        }
        prop_assert!(diff.max_abs() < 1e-10);
    }
}
