use hkgeom::cubic::{upsilon_from_cubic, SUPPORTED_DIMS};
use hkgeom::isoparametric::CubicField;
use hkgeom::lie::{act_sym3, bracket, skew_basis, stabilizer_sym3, SkewMatrix};
use hkgeom::linalg::DEFAULT_RANK_TOL;
use hkgeom::tensor::pair_count;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> SkewMatrix<f64> {
    SkewMatrix::from_coords(n, (0..pair_count(n)).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

fn dense(x: &SkewMatrix<f64>) -> DMatrix<f64> {
    let n = x.n();
    DMatrix::from_fn(n, n, |i, j| x.entry(i, j))
}

#[test]
fn exact_and_float_stabilizers_agree() {
    for n in [5, 8, 14] {
        let u = upsilon_from_cubic(n).unwrap();
        let exact = stabilizer_sym3(&u, 0.0).to_f64().with_tolerance(DEFAULT_RANK_TOL);
        let float = stabilizer_sym3(&u.to_f64(), DEFAULT_RANK_TOL);
        assert_eq!(exact.dim(), float.dim());
        assert_eq!(exact.sum_dim(&float).unwrap(), float.dim(), "n={n}");
    }
}

#[test]
fn stabilizer_annihilates_tensor_exactly() {
    for n in [5, 8, 14] {
        let u = upsilon_from_cubic(n).unwrap();
        let h = stabilizer_sym3(&u, 0.0);
        for x in skew_basis(n, &h) {
            assert!(act_sym3(&x, &u).unwrap().is_zero());
        }
    }
}

#[test]
fn group_orbit_preserves_the_cubic() {
    // exp(tX) for X in the stabilizer is a symmetry of F.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in SUPPORTED_DIMS {
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let h = stabilizer_sym3(&u, DEFAULT_RANK_TOL);
        let f = CubicField::new(&u);
        let basis = skew_basis(n, &h);
        let mut x = DMatrix::<f64>::zeros(n, n);
        for b in &basis {
            x += dense(b) * rng.random_range(-1.0..1.0);
        }
        let g = x.exp();
        assert!((g.transpose() * &g - DMatrix::identity(n, n)).amax() < 1e-10);
        for _ in 0..10 {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ga = &g * nalgebra::DVector::from_column_slice(&a);
            assert!((f.value(&a) - f.value(ga.as_slice())).abs() < 1e-10, "n={n}");
        }
    }
}

#[test]
fn generic_rotation_moves_the_cubic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let u = upsilon_from_cubic(5).unwrap().to_f64();
    let f = CubicField::new(&u);
    let g = dense(&random_skew(&mut rng, 5)).exp();
    let a = [0.3, -0.1, 0.7, 0.2, -0.5];
    let ga = &g * nalgebra::DVector::from_column_slice(&a);
    assert!((f.value(&a) - f.value(ga.as_slice())).abs() > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The tensor action is an anti-homomorphism: `X.(Y.T) - Y.(X.T) = -[X,Y].T`.
    #[test]
    fn action_respects_bracket(seed in any::<u64>(), k in 0usize..3) {
        let n = [5, 8, 14][k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let x = random_skew(&mut rng, n);
        let y = random_skew(&mut rng, n);
        let xy = act_sym3(&x, &act_sym3(&y, &u).unwrap()).unwrap();
        let yx = act_sym3(&y, &act_sym3(&x, &u).unwrap()).unwrap();
        let b = act_sym3(&bracket(&x, &y), &u).unwrap();
        let mut diff = xy;
        for (key, v) in yx.entries() {
            diff.add_sorted(*key, -v);
        }
        for (key, v) in b.entries() {
            diff.add_sorted(*key, *v);
        }
        prop_assert!(diff.max_abs() < 1e-10);
    }

    #[test]
    fn stabilizer_is_bracket_closed_under_random_combinations(seed in any::<u64>(), k in 0usize..3) {
        let n = [5, 8, 14][k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let h = stabilizer_sym3(&u, DEFAULT_RANK_TOL);
        let basis = skew_basis(n, &h);
        let combo = |rng: &mut ChaCha8Rng| {
            basis.iter().fold(SkewMatrix::zeros(n), |acc, b| acc.add(&b.scale(&rng.random_range(-1.0..1.0))))
        };
        let x = combo(&mut rng);
        let y = combo(&mut rng);
        prop_assert!(act_sym3(&bracket(&x, &y), &u).unwrap().max_abs() < 1e-10);
    }
}
