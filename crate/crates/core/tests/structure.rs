use hkgeom::cubic::upsilon_from_cubic;
use hkgeom::decompose::{
    component_counts, group_name, intersection_by_slices, isotypic, restricted_component_counts, DecomposeOptions,
};
use hkgeom::forms::{build_catalog, rotate_form, search_frame, shared_three_form, two_form};
use hkgeom::lie::{grading_of_sym3, stabilizer_sym3, ModuleKind};
use hkgeom::linalg::DEFAULT_RANK_TOL;
use hkgeom::magic::{header_pattern_holds, model_table};
use hkgeom::ScalarQ3;
use nalgebra::DMatrix;

fn q(k: i64) -> ScalarQ3 {
    ScalarQ3::rational(k, 1)
}

fn r3() -> ScalarQ3 {
    ScalarQ3::sqrt3_multiple(1, 1)
}

#[test]
fn tau_and_psi_terms() {
    let c = build_catalog();
    assert_eq!(c.tau[0], two_form(8, &[(1, 4, q(1)), (2, 3, q(1)), (1, 5, r3())]));
    assert_eq!(c.tau[1].entry(1, 3), q(-1));
    assert_eq!(c.tau[1].entry(1, 4), r3());
    assert_eq!(c.tau[2].entry(2, 3), q(-2));
    // psi = sum tau_i ^ theta^(5+i) + theta^678
    assert_eq!(c.psi.get(5, 6, 7), q(1));
    assert_eq!(c.psi.get(0, 3, 5), q(1));
    assert_eq!(c.psi.get(0, 4, 5), r3());
    assert_eq!(c.psi.get(1, 3, 6), q(-1));
    assert_eq!(c.psi.get(2, 3, 7), q(-2));
    assert_eq!(c.psi.nnz(), 3 + 3 + 2 + 1);
}

#[test]
fn sigma_and_phi_terms() {
    let c = build_catalog();
    assert_eq!(c.sigma[0].entry(0, 2), q(1));
    assert_eq!(c.sigma[0].entry(1, 3), q(-1));
    assert_eq!(c.sigma[1].entry(0, 3), q(-1));
    assert_eq!(c.sigma[2].entry(2, 3), q(1));
    assert_eq!(c.phi.get(4, 5, 6), q(1));
    assert_eq!(c.phi.get(0, 1, 6), q(1));
    assert_eq!(c.phi.nnz(), 7);
}

#[test]
fn shared_form_is_psi_up_to_scale() {
    let s = shared_three_form();
    assert_eq!(s.len(), 1);
    let psi = build_catalog().psi;
    let (k, v) = psi.entries().iter().next().unwrap();
    let ratio = s[0].entries()[k].clone() * v.try_inv().unwrap();
    assert_eq!(s[0], psi.scale(&ratio));
}

#[test]
fn frame_search_finds_an_explicit_rotation() {
    let psi = build_catalog().psi.to_f64();
    // a permutation-with-signs frame change of psi, undone by the search
    let mut p = DMatrix::<f64>::zeros(8, 8);
    for (i, j, s) in [
        (0, 1, 1.0),
        (1, 0, 1.0),
        (2, 2, -1.0),
        (3, 3, 1.0),
        (4, 4, 1.0),
        (5, 6, 1.0),
        (6, 5, 1.0),
        (7, 7, 1.0),
    ] {
        p[(i, j)] = s;
    }
    let moved = rotate_form(&p, &psi);
    let f = search_frame(&moved, &psi, 16, 3);
    assert!(f.found, "residual {}", f.best_residual);
}

#[test]
fn magic_square_entries() {
    let t = model_table();
    assert_eq!(t.len(), 14);
    assert!(t.iter().all(|e| e.matches()));
    assert!(header_pattern_holds(&t));
    let dims: Vec<usize> = t.iter().map(|e| e.space_dim).collect();
    assert_eq!(dims, [5, 8, 14, 26, 12, 18, 30, 54, 28, 40, 64, 112, 8, 32]);
}

#[test]
fn lambda3_decompositions() {
    for (n, dims) in [(5, vec![7, 3]), (8, vec![27, 20, 8, 1]), (14, vec![189, 84, 70, 21])] {
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let h = stabilizer_sym3(&u, DEFAULT_RANK_TOL);
        let iso = isotypic(
            n,
            &h,
            &grading_of_sym3(&u),
            ModuleKind::Lambda3,
            DecomposeOptions::default(),
        )
        .unwrap();
        assert_eq!(iso.report.dims_descending(), dims);
        assert!(iso.commutator_residual < 1e-10);
        assert!(iso.report.components.iter().all(|c| c.matched_irrep_dim.is_some()));
    }
}

#[test]
fn connection_decompositions() {
    for (n, dims) in [
        (5, vec![14, 11, 10, 9, 6]),
        (8, vec![81, 70, 40, 32, 1]),
        (14, vec![512, 378, 140, 90, 84, 42, 28]),
    ] {
        let u = upsilon_from_cubic(n).unwrap().to_f64();
        let h = stabilizer_sym3(&u, DEFAULT_RANK_TOL);
        let iso = isotypic(
            n,
            &h,
            &grading_of_sym3(&u),
            ModuleKind::Conn,
            DecomposeOptions::default(),
        )
        .unwrap();
        assert_eq!(iso.report.dims_descending(), dims, "n={n}");
        assert_eq!(dims.iter().sum::<usize>(), n * n * (n - 1) / 2);
    }
}

#[test]
fn large_module_needs_slow_profile() {
    let u = upsilon_from_cubic(26).unwrap().to_f64();
    let h = stabilizer_sym3(&u, DEFAULT_RANK_TOL);
    let r = isotypic(
        26,
        &h,
        &grading_of_sym3(&u),
        ModuleKind::Conn,
        DecomposeOptions::default(),
    );
    assert!(matches!(r, Err(hkgeom::Error::ModuleTooLarge { dim: 8450 })));
}

#[test]
fn counts_exact_and_float_agree() {
    for n in [5, 8, 14] {
        let u = upsilon_from_cubic(n).unwrap();
        let exact = component_counts(n, &stabilizer_sym3(&u, 0.0), 0.0).unwrap();
        let float = restricted_component_counts(n, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(exact, float);
        assert_eq!(intersection_by_slices(&u, 0.0).len(), exact.intersection_dim);
    }
    assert_eq!(group_name(14), Some("Sp(3)"));
}
