//! Isotypic decomposition by Casimir eigenvalues, the embedding of
//! 3-forms into so(n) (x) R^n, and the component counts of the
//! nearly-integrable connection space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::SignGrading;
use crate::lie::{self, bracket, casimir, orthonormal_skew_basis, EigenBlock, ModuleKind, SkewMatrix, TensorModule};
use crate::linalg::{self, Solve, SparseVec, DEFAULT_RANK_TOL};
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use crate::tensor::{pair_count, pair_index, triples, ConnElement, ThreeForm, UpsilonTensor};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Name of the structure group in dimension `n`.
pub fn group_name(n: usize) -> Option<&'static str> {
    match n {
        5 => Some("SO(3)"),
        8 => Some("SU(3)"),
        14 => Some("Sp(3)"),
        26 => Some("F4"),
        _ => None,
    }
}

const SU3_DIMS: [usize; 5] = [1, 8, 20, 27, 70];
const SP3_DIMS: [usize; 10] = [1, 14, 21, 70, 84, 90, 126, 189, 512, 525];
const F4_DIMS: [usize; 9] = [1, 26, 52, 273, 324, 1053, 1274, 4096, 8424];

/// Whether `d` is in the list of real irreducible dimensions for the group
/// of dimension `n` (all odd numbers for SO(3)).
pub fn is_listed_irrep_dim(n: usize, d: usize) -> bool {
    match n {
        5 => d % 2 == 1,
        8 => SU3_DIMS.contains(&d),
        14 => SP3_DIMS.contains(&d),
        26 => F4_DIMS.contains(&d),
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Component {
    pub casimir_eigenvalue: f64,
    pub dim: usize,
    pub matched_irrep_dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DecompositionReport {
    pub module_name: String,
    pub n: usize,
    pub total_dim: usize,
    /// Ascending eigenvalue.
    pub components: Vec<Component>,
}

impl DecompositionReport {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim).collect()
    }

    /// Dimensions in descending order.
    pub fn dims_descending(&self) -> Vec<usize> {
        let mut d = self.dims();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// `T ∈ ⁵V₇ ⊕ ⁵V₃` style summary.
    pub fn render_line(&self) -> String {
        let sym = match self.module_name.as_str() {
            "LAMBDA3" => "T",
            "VECTOR" => "v",
            _ => "C",
        };
        let n = superscript(self.n);
        let parts: Vec<String> = self
            .dims_descending()
            .into_iter()
            .map(|d| format!("{n}V{}", subscript(d)))
            .collect();
        format!("{sym} ∈ {}", parts.join(" ⊕ "))
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{} module, n = {}, total dimension {}\n{:>22}  {:>6}  {:>8}\n",
            self.module_name, self.n, self.total_dim, "casimir eigenvalue", "dim", "irrep"
        );
        for c in &self.components {
            let m = c.matched_irrep_dim.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{:>22.10}  {:>6}  {:>8}\n", c.casimir_eigenvalue, c.dim, m));
        }
        out.push_str(&self.render_line());
        out.push('\n');
        out
    }
}

fn map_digits(x: usize, table: [char; 10]) -> String {
    x.to_string()
        .chars()
        .map(|c| table[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn superscript(x: usize) -> String {
    map_digits(x, ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'])
}

fn subscript(x: usize) -> String {
    map_digits(x, ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'])
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub cluster_tol: f64,
    /// Allows the 8450-dimensional connection module at n = 26.
    pub slow: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            slow: false,
        }
    }
}

/// Largest module dimension handled without the slow profile.
pub const DEFAULT_MODULE_LIMIT: usize = 3000;

/// Eigen-decomposition of the Casimir on a module, with clustering.
#[derive(Clone, Debug)]
pub struct Isotypic {
    pub report: DecompositionReport,
    pub eigen: Vec<EigenBlock>,
    /// Casimir commutator residual, relative.
    pub commutator_residual: f64,
    /// `[lo, hi]` eigenvalue range of each reported component.
    pub ranges: Vec<(f64, f64)>,
}

impl Isotypic {
    /// Eigenvectors (as sparse module vectors) with eigenvalue within
    /// `tol * scale` of `lambda`.
    pub fn eigenvectors_near(&self, lambda: f64, tol: f64) -> Vec<SparseVec<f64>> {
        let scale = self.scale();
        let mut out = Vec::new();
        for b in &self.eigen {
            for (k, v) in b.values.iter().enumerate() {
                if (v - lambda).abs() <= tol * scale {
                    let mut col: SparseVec<f64> = b
                        .indices
                        .iter()
                        .enumerate()
                        .map(|(i, &g)| (g, b.vectors[(i, k)]))
                        .filter(|(_, x)| *x != 0.0)
                        .collect();
                    col.sort_by_key(|e| e.0);
                    out.push(col);
                }
            }
        }
        out
    }

    fn scale(&self) -> f64 {
        self.eigen
            .iter()
            .flat_map(|b| b.values.iter())
            .fold(1.0f64, |m, v| m.max(v.abs()))
    }
}

/// Sorted eigenvalues split wherever the gap exceeds `tol * scale`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, f64, usize, f64)> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut out: Vec<(f64, f64, usize, f64)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((_, hi, count, sum)) if x - *hi <= tol * scale => {
                *hi = x;
                *count += 1;
                *sum += x;
            }
            _ => out.push((x, x, 1, x)),
        }
    }
    out
}

/// Casimir decomposition of `module` under the subalgebra `h` of so(n).
pub fn isotypic(
    n: usize,
    h: &Subspace<f64>,
    grading: &SignGrading,
    module: ModuleKind,
    opts: DecomposeOptions,
) -> Result<Isotypic> {
    let dim = module.dim(n);
    if dim > DEFAULT_MODULE_LIMIT && !opts.slow {
        return Err(Error::ModuleTooLarge { dim });
    }
    let basis = orthonormal_skew_basis(n, h);
    let rep = TensorModule::new(module, grading.clone());
    let c = casimir(&basis, &rep, grading);
    let commutator_residual = c.commutator_residual(&basis, &rep);
    let eigen = c.eigen();
    let values: Vec<f64> = eigen.iter().flat_map(|b| b.values.iter().copied()).collect();
    let clusters = cluster(&values, opts.cluster_tol);
    let components = clusters
        .iter()
        .map(|&(_, _, d, sum)| Component {
            casimir_eigenvalue: sum / d as f64,
            dim: d,
            matched_irrep_dim: is_listed_irrep_dim(n, d).then_some(d),
        })
        .collect();
    let ranges = clusters.iter().map(|&(lo, hi, _, _)| (lo, hi)).collect();
    Ok(Isotypic {
        report: DecompositionReport {
            module_name: module.name().to_string(),
            n,
            total_dim: dim,
            components,
        },
        eigen,
        commutator_residual,
        ranges,
    })
}

/// `C_{(a,b), l} = T_{abl}`.
pub fn embed_lambda3<S: Scalar>(t: &ThreeForm<S>) -> ConnElement<S> {
    let n = t.n();
    let mut c = ConnElement::zeros(n);
    for (k, v) in t.entries() {
        let [a, b, l] = k.map(|x| x as usize);
        c.set(a, b, l, v.clone());
        c.set(a, l, b, -v.clone());
        c.set(b, l, a, v.clone());
    }
    c
}

/// Inverse of [`embed_lambda3`] on its image: `T_abc = C_{(a,b), c}`.
pub fn read_lambda3<S: Scalar>(c: &ConnElement<S>) -> ThreeForm<S> {
    let n = c.n();
    ThreeForm::from_terms(n, triples(n).into_iter().map(|[a, b, l]| ([a, b, l], c.get(a, b, l))))
}

/// Sparse coordinates of `embed(e_a ^ e_b ^ e_c)` in so(n) (x) R^n.
pub fn embed_basis_vector<S: Scalar>(n: usize, [a, b, c]: [usize; 3]) -> SparseVec<S> {
    let mut v = vec![
        (pair_index(n, a, b) * n + c, S::one()),
        (pair_index(n, a, c) * n + b, -S::one()),
        (pair_index(n, b, c) * n + a, S::one()),
    ];
    v.sort_by_key(|e| e.0);
    v
}

/// `embed(Lambda^3 R^n)` inside so(n) (x) R^n.
pub fn lambda3_conn_basis<S: Solve>(n: usize, rank_tol: f64) -> Subspace<S> {
    let basis = triples(n).into_iter().map(|t| embed_basis_vector(n, t)).collect();
    Subspace::from_basis(pair_count(n) * n, basis, rank_tol)
}

/// `h (x) R^n` inside so(n) (x) R^n, basis `Y_alpha (x) e_l`.
pub fn h_conn_basis<S: Solve>(h: &Subspace<S>, n: usize) -> Subspace<S> {
    let mut basis = Vec::with_capacity(h.dim() * n);
    for y in h.basis() {
        for l in 0..n {
            basis.push(y.iter().map(|(p, v)| (p * n + l, v.clone())).collect());
        }
    }
    let tol = h.rank_tolerance().unwrap_or(DEFAULT_RANK_TOL);
    Subspace::from_basis(pair_count(n) * n, basis, tol)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComponentCounts {
    pub n: usize,
    pub total: usize,
    pub restricted: usize,
    pub h_conn_dim: usize,
    pub lambda3_dim: usize,
    pub intersection_dim: usize,
    pub sum_dim: usize,
    /// Dimension removed by the V_1 exclusion (n = 8 only).
    pub v1_excluded: usize,
}

/// Counts from a given stabilizer.
pub fn component_counts<S: Solve>(n: usize, h: &Subspace<S>, rank_tol: f64) -> Result<ComponentCounts> {
    let a = h_conn_basis(h, n);
    let b: Subspace<S> = lambda3_conn_basis(n, rank_tol);
    let inter = a.intersection(&b)?;
    let sum_dim = a.dim() + b.dim() - inter.dim();
    let v1_excluded = usize::from(n == 8);
    Ok(ComponentCounts {
        n,
        total: pair_count(n) * n,
        restricted: sum_dim - v1_excluded,
        h_conn_dim: a.dim(),
        lambda3_dim: b.dim(),
        intersection_dim: inter.dim(),
        sum_dim,
        v1_excluded,
    })
}

/// Counts for the determinant tensor in dimension `n`, float rank.
pub fn restricted_component_counts(n: usize, rank_tol: f64) -> Result<ComponentCounts> {
    let u = crate::cubic::upsilon_from_cubic(n)?.to_f64();
    let h = lie::stabilizer_sym3(&u, rank_tol);
    component_counts(n, &h, rank_tol)
}

/// `h (x) R^n ∩ embed(Lambda^3)` as the kernel of `T -> (T_l . Y)_l`,
/// independent of any basis of `h`.
pub fn intersection_by_slices<S: Solve>(u: &UpsilonTensor<S>, rank_tol: f64) -> Vec<ThreeForm<S>> {
    let n = u.n();
    let mut kc: linalg::KeyedCols<(u8, [u8; 3]), S> = linalg::KeyedCols::new();
    let ts = triples(n);
    for t in &ts {
        let form = ThreeForm::from_terms(n, [(*t, S::one())]);
        let c = embed_lambda3(&form);
        let mut entries = Vec::new();
        for l in 0..n {
            let x = SkewMatrix::from_coords(n, c.slice(l)).expect("slice");
            if x.is_zero() {
                continue;
            }
            let img = lie::act_sym3_rows(&x.rows(), u);
            entries.extend(img.entries().iter().map(|(k, v)| ((l as u8, *k), v.clone())));
        }
        kc.push_col(entries);
    }
    let (_, m) = kc.finish();
    linalg::nullspace(&m, rank_tol)
        .into_iter()
        .map(|k| ThreeForm::from_terms(n, k.into_iter().map(|(i, v)| (ts[i], v))))
        .collect()
}

/// Casimir eigenvalue of `h` on its own adjoint module.
pub fn adjoint_casimir_eigenvalue(basis: &[SkewMatrix<f64>]) -> f64 {
    let y = &basis[0];
    let mut acc = SkewMatrix::zeros(y.n());
    for x in basis {
        acc = acc.add(&bracket(x, &bracket(x, y)));
    }
    let num: f64 = acc.coords().iter().zip(y.coords()).map(|(a, b)| a * b).sum();
    num / y.norm2()
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointIsotypicCheck {
    pub n: usize,
    pub adjoint_eigenvalue: f64,
    pub isotypic_dim: usize,
    pub multiplicity: f64,
    pub sum_dim: usize,
    /// `dim(isotypic ∩ (h (x) R^n + embed(Lambda^3)))`.
    pub intersection_dim: usize,
}

/// Locate the adjoint-type isotypic component of so(n) (x) R^n and
/// intersect it with `h (x) R^n + embed(Lambda^3)`.
pub fn adjoint_isotypic_check(
    n: usize,
    h: &Subspace<f64>,
    grading: &SignGrading,
    opts: DecomposeOptions,
) -> Result<AdjointIsotypicCheck> {
    let iso = isotypic(n, h, grading, ModuleKind::Conn, opts)?;
    let basis = orthonormal_skew_basis(n, h);
    let lambda = adjoint_casimir_eigenvalue(&basis);
    let v = iso.eigenvectors_near(lambda, opts.cluster_tol);
    let tol = h.rank_tolerance().unwrap_or(DEFAULT_RANK_TOL);
    let a = h_conn_basis(h, n);
    let b: Subspace<f64> = lambda3_conn_basis(n, tol);
    let ab: Vec<SparseVec<f64>> = a.basis().iter().chain(b.basis()).cloned().collect();
    let sum = Subspace::span(pair_count(n) * n, ab.clone(), tol);
    let all: Vec<SparseVec<f64>> = v.iter().cloned().chain(ab).collect();
    let total_rank = linalg::rank(&linalg::SparseCols::from_cols(pair_count(n) * n, all), tol);
    Ok(AdjointIsotypicCheck {
        n,
        adjoint_eigenvalue: lambda,
        isotypic_dim: v.len(),
        multiplicity: v.len() as f64 / h.dim() as f64,
        sum_dim: sum.dim(),
        intersection_dim: v.len() + sum.dim() - total_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q3::ScalarQ3;

    #[test]
    fn embed_examples() {
        let t = ThreeForm::from_terms(5, [([0, 1, 2], 1.0)]);
        let c = embed_lambda3(&t);
        let nonzero_slices = (0..5).filter(|&l| c.slice(l).iter().any(|v| *v != 0.0)).count();
        assert_eq!(nonzero_slices, 3);
        assert_eq!(read_lambda3(&c), t);
        let s = embed_basis_vector::<f64>(5, [0, 1, 2]);
        assert_eq!(linalg::to_dense(&s, 50), c.comps().to_vec());
    }

    #[test]
    fn embed_scales_inner_product_by_three() {
        let t1 = ThreeForm::from_terms(5, [([0, 1, 2], 2.0), ([1, 3, 4], -1.0)]);
        let t2 = ThreeForm::from_terms(5, [([0, 1, 2], 0.5), ([0, 3, 4], 1.0), ([1, 3, 4], 3.0)]);
        assert_eq!(embed_lambda3(&t1).dot(&embed_lambda3(&t2)), 3.0 * t1.dot(&t2));
    }

    #[test]
    fn clustering() {
        let c = cluster(&[1.0, -2.0, 1.0 + 1e-9, -2.0], 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].2, 2);
        assert_eq!(c[1].2, 2);
    }

    #[test]
    fn render() {
        let r = DecompositionReport {
            module_name: "LAMBDA3".into(),
            n: 5,
            total_dim: 10,
            components: vec![
                Component {
                    casimir_eigenvalue: -12.0,
                    dim: 7,
                    matched_irrep_dim: Some(7),
                },
                Component {
                    casimir_eigenvalue: -2.0,
                    dim: 3,
                    matched_irrep_dim: Some(3),
                },
            ],
        };
        assert_eq!(r.render_line(), "T ∈ ⁵V₇ ⊕ ⁵V₃");
    }

    #[test]
    fn counts_n5_exact() {
        let u = crate::cubic::upsilon_from_cubic(5).unwrap();
        let h = lie::stabilizer_sym3(&u, 0.0);
        let c = component_counts::<ScalarQ3>(5, &h, 0.0).unwrap();
        assert_eq!((c.total, c.restricted, c.intersection_dim), (50, 25, 0));
    }
}
