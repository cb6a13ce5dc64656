//! Sparse multivariate polynomials, used to expand the determinant cubic
//! symbolically and to check the differential identities of the cubic form.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::q3::ScalarQ3;
use crate::scalar::{FromQ3, Ring};

/// Sorted list of 0-based variable indices; `[0, 0, 3]` is `a_1^2 a_4`.
pub type Monomial = SmallVec<[u8; 4]>;

/// Polynomial with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Poly<R> {
    pub fn var(index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SmallVec::from_slice(&[index as u8]), R::one());
        Poly { terms }
    }

    pub fn constant(c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(iter: I) -> Self {
        let mut p = Poly { terms: BTreeMap::new() };
        for (mut m, c) in iter {
            m.sort_unstable();
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u8]) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.len() == degree)
    }

    fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let v = slot.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, k: &R) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), k.clone() * c.clone())))
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let v = var as u8;
        let mut out = Poly { terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let power = m.iter().filter(|&&x| x == v).count();
            if power == 0 {
                continue;
            }
            let mut reduced = m.clone();
            let pos = reduced.iter().position(|&x| x == v).unwrap();
            reduced.remove(pos);
            let mut k = R::zero();
            for _ in 0..power {
                k = k + R::one();
            }
            out.add_term(reduced, k * c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[R]) -> R {
        self.terms.iter().fold(R::zero(), |acc, (m, c)| {
            let v = m.iter().fold(c.clone(), |p, &i| p * point[i as usize].clone());
            acc + v
        })
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Poly { terms: BTreeMap::new() };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m: Monomial = m1.iter().chain(m2.iter()).copied().collect();
                m.sort_unstable();
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<R: FromQ3> FromQ3 for Poly<R> {
    fn from_q3(x: &ScalarQ3) -> Self {
        Poly::constant(R::from_q3(x))
    }
}
