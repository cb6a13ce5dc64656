//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! Everything above this module is written against [`Ring`] (for symbolic
//! expansion) or [`Scalar`] (for linear algebra).  Two scalar types ship:
//! [`ScalarQ3`](crate::ScalarQ3), exact elements of the field Q(sqrt 3), and
//! `f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::q3::ScalarQ3;

/// Commutative ring with unit, used by the algebra and polynomial layers.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Debug + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Rings that contain a copy of Q(sqrt 3).
pub trait FromQ3: Ring {
    fn from_q3(x: &ScalarQ3) -> Self;
}

/// Field scalar usable by the linear-algebra layer.
pub trait Scalar: FromQ3 + Send + Sync + Serialize + DeserializeOwned + 'static {
    /// `true` for exact arithmetic; rank decisions ignore tolerances.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn sqrt3() -> Self;

    fn to_f64(&self) -> f64;

    /// Multiplicative inverse, `None` on zero.
    fn inv(&self) -> Option<Self>;

    /// Zero test used by elimination: exact zero, or `|x| <= tol` for floats.
    fn negligible(&self, tol: f64) -> bool;

    /// Rough size used to pick pivots.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl FromQ3 for f64 {
    fn from_q3(x: &ScalarQ3) -> Self {
        x.to_f64()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn sqrt3() -> Self {
        3f64.sqrt()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// Number of distinct orderings of a sorted index tuple.
pub fn multinomial(sorted: &[u8]) -> i64 {
    let mut count: i64 = (1..=sorted.len() as i64).product();
    let mut run = 1i64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            count /= run;
        } else {
            run = 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial(&[0, 1, 2]), 6);
        assert_eq!(multinomial(&[0, 0, 2]), 3);
        assert_eq!(multinomial(&[4, 4, 4]), 1);
        assert_eq!(multinomial(&[0, 0, 1, 1]), 6);
        assert_eq!(multinomial(&[0, 1, 1, 1]), 4);
        assert_eq!(multinomial(&[0, 1, 2, 3]), 24);
    }
}
