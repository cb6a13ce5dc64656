use hkgeom::cubic::{build_hermitian, det3, upsilon_from_cubic, DetMethod, SUPPORTED_DIMS};
use hkgeom::upsilon::{evaluate_cubic, identity_iii_lhs, identity_iii_rhs};
use hkgeom::ScalarQ3;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn det(a: &[ScalarQ3]) -> ScalarQ3 {
    det3(&build_hermitian(a).unwrap(), DetMethod::Freudenthal).unwrap()
}

fn unit(n: usize, i: usize) -> Vec<ScalarQ3> {
    let mut v = vec![ScalarQ3::zero(); n];
    v[i] = ScalarQ3::rational(1, 1);
    v
}

fn add(x: &[ScalarQ3], y: &[ScalarQ3]) -> Vec<ScalarQ3> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

/// Full polarization of the determinant, evaluated pointwise:
/// `P(x,y,z) = (w(x+y+z) - w(x+y) - w(x+z) - w(y+z) + w(x) + w(y) + w(z)) / 6`.
fn polarize(x: &[ScalarQ3], y: &[ScalarQ3], z: &[ScalarQ3]) -> ScalarQ3 {
    let xy = add(x, y);
    let xyz = add(&xy, z);
    let xz = add(x, z);
    let yz = add(y, z);
    (det(&xyz) - det(&xy) - det(&xz) - det(&yz) + det(x) + det(y) + det(z)) * ScalarQ3::rational(1, 6)
}

#[test]
fn tensor_matches_pointwise_polarization() {
    // w = 2 Y(a, a, a), so P = 2 Y.
    let half = ScalarQ3::rational(1, 2);
    for n in [5, 8] {
        let u = upsilon_from_cubic(n).unwrap();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let p = polarize(&unit(n, i), &unit(n, j), &unit(n, k));
                    assert_eq!(u.get(i, j, k), p * half.clone(), "n={n} ({i},{j},{k})");
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [14, 26] {
        let u = upsilon_from_cubic(n).unwrap();
        for _ in 0..200 {
            let [i, j, k] = [0; 3].map(|_| rng.random_range(0..n));
            let p = polarize(&unit(n, i), &unit(n, j), &unit(n, k));
            assert_eq!(u.get(i, j, k), p * half.clone(), "n={n} ({i},{j},{k})");
        }
    }
}

#[test]
fn identity_iii_fixes_the_normalization() {
    for n in SUPPORTED_DIMS {
        let u = upsilon_from_cubic(n).unwrap();
        let adj = u.adjacency();
        assert_eq!(
            identity_iii_lhs(&adj, n, [0, 0, 0, 0]),
            ScalarQ3::rational(identity_iii_rhs(0, 0, 0, 0), 1)
        );
        // (1/6) D^3 w is twice Y and overshoots by a factor of four.
        let double = u.scale(&ScalarQ3::rational(2, 1));
        let adj2 = double.adjacency();
        assert_eq!(identity_iii_lhs(&adj2, n, [0, 0, 0, 0]), ScalarQ3::rational(12, 1));
    }
}

#[test]
fn printed_value_at_e5() {
    let u = upsilon_from_cubic(5).unwrap();
    // F(e5) = w(e5) / 2 = -1
    assert_eq!(evaluate_cubic(&u, &unit(5, 4)).unwrap(), ScalarQ3::rational(-1, 1));
    assert_eq!(det(&unit(5, 4)), ScalarQ3::rational(-2, 1));
}

fn exact_point(seed: u64, n: usize) -> Vec<ScalarQ3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| ScalarQ3::rational(rng.random_range(-12..=12), rng.random_range(1..=6)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cubic_equals_half_determinant(seed in any::<u64>(), k in 0usize..4) {
        let n = SUPPORTED_DIMS[k];
        let u = upsilon_from_cubic(n).unwrap();
        let a = exact_point(seed, n);
        prop_assert_eq!(evaluate_cubic(&u, &a).unwrap() * ScalarQ3::rational(2, 1), det(&a));
    }

    #[test]
    fn hermitian_is_traceless(seed in any::<u64>(), k in 0usize..4) {
        let n = SUPPORTED_DIMS[k];
        prop_assert!(build_hermitian(&exact_point(seed, n)).unwrap().trace().is_zero());
    }

    #[test]
    fn cubic_is_odd_and_homogeneous(seed in any::<u64>(), k in 0usize..4, s in -5i64..=5) {
        let n = SUPPORTED_DIMS[k];
        let a = exact_point(seed, n);
        let scaled: Vec<ScalarQ3> = a.iter().map(|x| x.scale_int(s)).collect();
        prop_assert_eq!(det(&scaled), det(&a).scale_int(s * s * s));
    }

    #[test]
    fn float_evaluation_tracks_exact(seed in any::<u64>(), k in 0usize..4) {
        let n = SUPPORTED_DIMS[k];
        let u = upsilon_from_cubic(n).unwrap();
        let a = exact_point(seed, n);
        let exact = evaluate_cubic(&u, &a).unwrap().to_f64();
        let af: Vec<f64> = a.iter().map(|x| x.to_f64()).collect();
        let float = evaluate_cubic(&u.to_f64(), &af).unwrap();
        prop_assert!((exact - float).abs() <= 1e-9 * (1.0 + exact.abs()));
    }
}
