//! The traceless Hermitian 3x3 matrix attached to a point of R^n and its
//! determinant cubic.
//!
//! For `n = 5, 8, 14, 26` the off-diagonal data lives in R, C, H, O.  The
//! determinant `w(a)` is expanded symbolically and the symmetric tensor is
//! read off as `Y = (1/12) D^3 w`, i.e. `w = 2 Y_ijk a_i a_j a_k`.  With this
//! normalization the quadratic identity on `Y` holds exactly; reading the
//! tensor off `w` itself makes it fail by a factor of four.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, AlgebraId};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::q3::ScalarQ3;
use crate::scalar::{multinomial, FromQ3, Ring};
use crate::tensor::UpsilonTensor;

pub const SUPPORTED_DIMS: [usize; 4] = [5, 8, 14, 26];

/// 1-based coordinates of `alpha_1, alpha_2, alpha_3` along `(1, i, j, k, p, q, r, s)`.
pub const ALPHA_COORDS: [[usize; 8]; 3] = [
    [1, 6, 9, 10, 15, 16, 17, 18],
    [2, 7, 11, 12, 19, 20, 21, 22],
    [3, 8, 13, 14, 23, 24, 25, 26],
];

pub fn algebra_for_dim(n: usize) -> Result<AlgebraId> {
    match n {
        5 | 8 | 14 | 26 => Ok(AlgebraId::from_dim((n - 2) / 3).expect("supported dim")),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Point of R^n; stored 0-based, documented 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVec<S> {
    pub a: Vec<S>,
}

impl<S> PointVec<S> {
    pub fn new(a: Vec<S>) -> Self {
        PointVec { a }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DetMethod {
    Freudenthal,
    WeierstrassLeft,
}

/// `[[d1, x3, conj x2], [conj x3, d2, x1], [x2, conj x1, d3]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Herm3<R> {
    pub d: [R; 3],
    pub x1: AlgElement<R>,
    pub x2: AlgElement<R>,
    pub x3: AlgElement<R>,
}

impl<R: Ring> Herm3<R> {
    pub fn algebra(&self) -> AlgebraId {
        self.x1.algebra
    }

    pub fn trace(&self) -> R {
        self.d[0].clone() + self.d[1].clone() + self.d[2].clone()
    }

    /// Full matrix of algebra elements, diagonal embedded as real elements.
    pub fn entries(&self) -> [[AlgElement<R>; 3]; 3] {
        let alg = self.algebra();
        let re = |v: &R| AlgElement::real(alg, v.clone());
        [
            [re(&self.d[0]), self.x3.clone(), self.x2.conj()],
            [self.x3.conj(), re(&self.d[1]), self.x1.clone()],
            [self.x2.clone(), self.x1.conj(), re(&self.d[2])],
        ]
    }
}

/// Build the Hermitian matrix for a point `a` of R^n, `n` in {5, 8, 14, 26}.
pub fn build_hermitian<R: FromQ3>(a: &[R]) -> Result<Herm3<R>> {
    let n = a.len();
    let alg = algebra_for_dim(n)?;
    let r3 = R::from_q3(&ScalarQ3::sqrt3_multiple(1, 1));
    let two = R::one() + R::one();
    let (a4, a5) = (a[3].clone(), a[4].clone());
    let d = [
        a5.clone() - r3.clone() * a4.clone(),
        a5.clone() + r3.clone() * a4,
        -(two * a5),
    ];
    let alpha = |t: usize| {
        let coords = ALPHA_COORDS[t][..alg.dim()].iter().map(|&i| a[i - 1].clone()).collect();
        AlgElement { algebra: alg, coords }
    };
    Ok(Herm3 {
        d,
        x1: alpha(0).scale(&r3),
        x2: alpha(1).conj().scale(&r3),
        x3: alpha(2).scale(&r3),
    })
}

/// Real determinant of a traceless Hermitian 3x3 matrix.
///
/// `WeierstrassLeft` evaluates the signed permutation sum with products
/// taken in row order and bracketed from the left; it returns
/// [`Error::NonRealWeierstrass`] when that sum is not real.
pub fn det3<R: Ring>(m: &Herm3<R>, method: DetMethod) -> Result<R> {
    match method {
        DetMethod::Freudenthal => Ok(freudenthal(m)),
        DetMethod::WeierstrassLeft => {
            let sum = weierstrass_sum(m);
            if sum.is_real() {
                Ok(sum.re())
            } else {
                let nonzero_coords = sum
                    .coords
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, _)| i)
                    .collect();
                Err(Error::NonRealWeierstrass { nonzero_coords })
            }
        }
    }
}

fn freudenthal<R: Ring>(m: &Herm3<R>) -> R {
    let [d1, d2, d3] = m.d.clone();
    let triple = &(&m.x1 * &m.x2) * &m.x3;
    let two = R::one() + R::one();
    d1.clone() * d2.clone() * d3.clone() - d1 * m.x1.norm2() - d2 * m.x2.norm2() - d3 * m.x3.norm2() + two * triple.re()
}

const S3: [([usize; 3], bool); 6] = [
    ([0, 1, 2], true),
    ([0, 2, 1], false),
    ([1, 0, 2], false),
    ([1, 2, 0], true),
    ([2, 0, 1], true),
    ([2, 1, 0], false),
];

/// The full algebra-valued permutation sum `sum sgn(pi) ((A_1pi1 A_2pi2) A_3pi3)`.
pub fn weierstrass_sum<R: Ring>(m: &Herm3<R>) -> AlgElement<R> {
    let a = m.entries();
    let mut acc = AlgElement::zero(m.algebra());
    for (perm, even) in S3 {
        let term = &(&a[0][perm[0]] * &a[1][perm[1]]) * &a[2][perm[2]];
        acc = if even { acc + term } else { acc - term };
    }
    acc
}

/// The determinant cubic `w(a)` as an exact polynomial in `a_1..a_n`.
pub fn cubic_polynomial(n: usize, method: DetMethod) -> Result<Poly<ScalarQ3>> {
    let vars: Vec<Poly<ScalarQ3>> = (0..n).map(Poly::var).collect();
    let h = build_hermitian(&vars)?;
    det3(&h, method)
}

/// Exact tensor `Y_ijk = (1/12) d_i d_j d_k w`.
pub fn upsilon_from_cubic(n: usize) -> Result<UpsilonTensor<ScalarQ3>> {
    upsilon_with_method(n, DetMethod::Freudenthal)
}

/// As [`upsilon_from_cubic`], with the determinant evaluated by `method`.
pub fn upsilon_with_method(n: usize, method: DetMethod) -> Result<UpsilonTensor<ScalarQ3>> {
    let w = cubic_polynomial(n, method)?;
    debug_assert!(w.is_homogeneous(3));
    let mut entries = std::collections::BTreeMap::new();
    for (m, c) in w.terms() {
        let key = [m[0], m[1], m[2]];
        let value = c.clone() * ScalarQ3::rational(1, 2 * multinomial(m));
        if !value.is_zero() {
            entries.insert(key, value);
        }
    }
    UpsilonTensor::from_sorted_entries(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> ScalarQ3 {
        ScalarQ3::rational(n, 1)
    }

    fn point(n: usize, nonzero: &[(usize, i64)]) -> Vec<ScalarQ3> {
        let mut a = vec![ScalarQ3::zero(); n];
        for &(i, v) in nonzero {
            a[i - 1] = q(v);
        }
        a
    }

    /// The printed five-dimensional polynomial, evaluated directly.
    fn printed_w5(a: &[ScalarQ3]) -> ScalarQ3 {
        let r3 = ScalarQ3::sqrt3_multiple(1, 1);
        let [a1, a2, a3, a4, a5] = [&a[0], &a[1], &a[2], &a[3], &a[4]].map(|x| x.clone());
        let sq = |x: &ScalarQ3| x * x;
        r3.scale_int(6) * a1.clone() * a2.clone() * a3.clone() + r3.scale_int(3) * (sq(&a1) - sq(&a2)) * a4.clone()
            - (sq(&a1).scale_int(3) + sq(&a2).scale_int(3) - sq(&a3).scale_int(6) - sq(&a4).scale_int(6)
                + sq(&a5).scale_int(2))
                * a5
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<ScalarQ3> {
        (0..n)
            .map(|_| ScalarQ3::rational(rng.random_range(-20..=20), rng.random_range(1..=7)))
            .collect()
    }

    #[test]
    fn hermitian_examples() {
        let h = build_hermitian(&point(5, &[(5, 1)])).unwrap();
        assert_eq!(h.d, [q(1), q(1), q(-2)]);
        assert!(h.x1.norm2().is_zero() && h.x2.norm2().is_zero() && h.x3.norm2().is_zero());

        let h = build_hermitian(&point(5, &[(1, 1)])).unwrap();
        assert_eq!(h.d, [q(0), q(0), q(0)]);
        assert_eq!(h.x1.coords, vec![ScalarQ3::sqrt3_multiple(1, 1)]);
        assert!(h.x2.norm2().is_zero() && h.x3.norm2().is_zero());

        let h = build_hermitian(&point(8, &[(6, 1)])).unwrap();
        assert_eq!(h.algebra(), AlgebraId::Complex);
        assert_eq!(h.x1.coords, vec![q(0), ScalarQ3::sqrt3_multiple(1, 1)]);
    }

    #[test]
    fn unsupported_dimension() {
        let a = vec![ScalarQ3::zero(); 6];
        assert!(matches!(build_hermitian(&a), Err(Error::UnsupportedDimension(6))));
        assert!(upsilon_from_cubic(7).is_err());
    }

    #[test]
    fn traceless_by_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in SUPPORTED_DIMS {
            let h = build_hermitian(&random_point(&mut rng, n)).unwrap();
            assert!(h.trace().is_zero());
        }
    }

    #[test]
    fn determinant_examples_n5() {
        let h = build_hermitian(&point(5, &[(5, 1)])).unwrap();
        assert_eq!(det3(&h, DetMethod::Freudenthal).unwrap(), q(-2));
        assert_eq!(det3(&h, DetMethod::WeierstrassLeft).unwrap(), q(-2));
        let h = build_hermitian(&point(5, &[(1, 1)])).unwrap();
        assert_eq!(det3(&h, DetMethod::Freudenthal).unwrap(), q(0));
    }

    #[test]
    fn determinant_matches_printed_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_point(&mut rng, 5);
            let h = build_hermitian(&a).unwrap();
            assert_eq!(det3(&h, DetMethod::Freudenthal).unwrap(), printed_w5(&a));
        }
        // as polynomials
        let w = cubic_polynomial(5, DetMethod::Freudenthal).unwrap();
        let vars: Vec<Poly<ScalarQ3>> = (0..5).map(Poly::var).collect();
        let r3 = Poly::constant(ScalarQ3::sqrt3_multiple(1, 1));
        let c = |k: i64| Poly::constant(q(k));
        let [a1, a2, a3, a4, a5] = [0, 1, 2, 3, 4].map(|i| vars[i].clone());
        let printed = c(6) * r3.clone() * a1.clone() * a2.clone() * a3.clone()
            + c(3) * r3 * (a1.clone() * a1.clone() - a2.clone() * a2.clone()) * a4.clone()
            - (c(3) * a1.clone() * a1 + c(3) * a2.clone() * a2 - c(6) * a3.clone() * a3 - c(6) * a4.clone() * a4
                + c(2) * a5.clone() * a5.clone())
                * a5;
        assert_eq!(w, printed);
    }

    #[test]
    fn weierstrass_agrees_for_commutative_algebras() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [5, 8] {
            for _ in 0..20 {
                let h = build_hermitian(&random_point(&mut rng, n)).unwrap();
                assert_eq!(
                    det3(&h, DetMethod::Freudenthal).unwrap(),
                    det3(&h, DetMethod::WeierstrassLeft).unwrap()
                );
            }
        }
    }

    #[test]
    fn row_ordered_weierstrass_is_not_real_over_quaternions() {
        // x3 = i, x1 = j, x2 = 1: the two 3-cycles contribute ij + ij = 2k.
        let alg = AlgebraId::Quaternion;
        let h = Herm3 {
            d: [q(0), q(0), q(0)],
            x1: AlgElement::unit(alg, 2),
            x2: AlgElement::unit(alg, 0),
            x3: AlgElement::unit(alg, 1),
        };
        let sum = weierstrass_sum(&h);
        assert_eq!(sum.coords[3], q(2));
        assert!(matches!(
            det3(&h, DetMethod::WeierstrassLeft),
            Err(Error::NonRealWeierstrass { .. })
        ));
        assert_eq!(det3(&h, DetMethod::Freudenthal).unwrap(), q(0));
    }

    #[test]
    fn cubic_is_odd() {
        for n in SUPPORTED_DIMS {
            let w = cubic_polynomial(n, DetMethod::Freudenthal).unwrap();
            assert!(w.is_homogeneous(3));
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let a = random_point(&mut rng, n);
            let neg: Vec<ScalarQ3> = a.iter().map(|x| -x.clone()).collect();
            assert_eq!(w.eval(&neg), -w.eval(&a));
        }
    }

    #[test]
    fn upsilon_coefficients_n5() {
        let u = upsilon_from_cubic(5).unwrap();
        assert_eq!(u.get(0, 1, 2), ScalarQ3::sqrt3_multiple(1, 2));
        assert_eq!(u.get(4, 4, 4), q(-1));
        assert_eq!(u.get(0, 0, 3), ScalarQ3::sqrt3_multiple(1, 2));
        assert_eq!(u.get(0, 0, 4), ScalarQ3::rational(-1, 2));
        let s: ScalarQ3 = (0..5).fold(ScalarQ3::zero(), |acc, i| {
            let v = u.get(0, 0, i);
            acc + &v * &v
        });
        assert_eq!(s, ScalarQ3::rational(1, 1));
    }

    #[test]
    fn twice_the_cubic_form_reproduces_w() {
        for n in SUPPORTED_DIMS {
            let u = upsilon_from_cubic(n).unwrap();
            let w = cubic_polynomial(n, DetMethod::Freudenthal).unwrap();
            assert_eq!(u.cubic_polynomial().scale(&q(2)), w, "n = {n}");
        }
    }
}
