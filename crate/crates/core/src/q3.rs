//! Exact arithmetic in the real quadratic field Q(sqrt 3).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{FromQ3, Scalar};

/// The number `p + q*sqrt(3)` with `p, q` arbitrary-precision rationals.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so the
/// derived equality is exact field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarQ3 {
    p: BigRational,
    q: BigRational,
}

impl ScalarQ3 {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        ScalarQ3 { p, q }
    }

    pub fn from_parts(p: (i64, i64), q: (i64, i64)) -> Self {
        ScalarQ3 {
            p: BigRational::new(p.0.into(), p.1.into()),
            q: BigRational::new(q.0.into(), q.1.into()),
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        ScalarQ3 {
            p: BigRational::new(num.into(), den.into()),
            q: BigRational::zero(),
        }
    }

    /// `num/den * sqrt(3)`.
    pub fn sqrt3_multiple(num: i64, den: i64) -> Self {
        ScalarQ3 {
            p: BigRational::zero(),
            q: BigRational::new(num.into(), den.into()),
        }
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// Galois conjugate `p - q*sqrt(3)`.
    pub fn conjugate(&self) -> Self {
        ScalarQ3 {
            p: self.p.clone(),
            q: -self.q.clone(),
        }
    }

    /// Field norm `p^2 - 3 q^2`; zero only at zero because sqrt 3 is irrational.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(3.into()) * &self.q * &self.q
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        debug_assert!(!n.is_zero());
        Ok(ScalarQ3 {
            p: &self.p / &n,
            q: -(&self.q / &n),
        })
    }

    /// Correctly rounded conversion: sqrt 3 enters as a 256-bit rational
    /// bound, so the only rounding happens in the final `to_f64`.
    pub fn to_f64(&self) -> f64 {
        if self.q.is_zero() {
            return self.p.to_f64().unwrap_or(f64::NAN);
        }
        if self.p.is_zero() && self.q.is_one() {
            return 3f64.sqrt();
        }
        let v = &self.p + &self.q * sqrt3_rational();
        v.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Multiply by an integer without building a `ScalarQ3` for it.
    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        ScalarQ3 {
            p: &self.p * &k,
            q: &self.q * &k,
        }
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.p.denom().lcm(self.q.denom())
    }
}

fn sqrt3_rational() -> &'static BigRational {
    static CELL: OnceLock<BigRational> = OnceLock::new();
    CELL.get_or_init(|| {
        let shift = 256u32;
        let scaled = (BigInt::from(3) << (2 * shift)).sqrt();
        BigRational::new(scaled, BigInt::one() << shift)
    })
}

impl fmt::Debug for ScalarQ3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ScalarQ3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "{}√3", self.q),
            (false, false) => {
                if self.q.is_negative() {
                    write!(f, "{} - {}√3", self.p, -self.q.clone())
                } else {
                    write!(f, "{} + {}√3", self.p, self.q)
                }
            }
        }
    }
}

impl Zero for ScalarQ3 {
    fn zero() -> Self {
        ScalarQ3 {
            p: BigRational::zero(),
            q: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
}

impl One for ScalarQ3 {
    fn one() -> Self {
        ScalarQ3 {
            p: BigRational::one(),
            q: BigRational::zero(),
        }
    }
}

impl<'a> Add<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn add(self, rhs: &ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl<'a> Sub<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn sub(self, rhs: &ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl<'a> Mul<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn mul(self, rhs: &ScalarQ3) -> ScalarQ3 {
        if self.q.is_zero() && rhs.q.is_zero() {
            return ScalarQ3 {
                p: &self.p * &rhs.p,
                q: BigRational::zero(),
            };
        }
        let three = BigRational::from_integer(3.into());
        ScalarQ3 {
            p: &self.p * &rhs.p + three * &self.q * &rhs.q,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl Add for ScalarQ3 {
    type Output = ScalarQ3;
    fn add(self, rhs: ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            p: self.p + rhs.p,
            q: self.q + rhs.q,
        }
    }
}

impl Sub for ScalarQ3 {
    type Output = ScalarQ3;
    fn sub(self, rhs: ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            p: self.p - rhs.p,
            q: self.q - rhs.q,
        }
    }
}

impl Mul for ScalarQ3 {
    type Output = ScalarQ3;
    fn mul(self, rhs: ScalarQ3) -> ScalarQ3 {
        &self * &rhs
    }
}

impl Div for ScalarQ3 {
    type Output = ScalarQ3;
    /// Panics on division by zero; use [`ScalarQ3::try_inv`] to handle it.
    fn div(self, rhs: ScalarQ3) -> ScalarQ3 {
        &self * &rhs.try_inv().expect("ScalarQ3 division by zero")
    }
}

impl Neg for ScalarQ3 {
    type Output = ScalarQ3;
    fn neg(self) -> ScalarQ3 {
        ScalarQ3 { p: -self.p, q: -self.q }
    }
}

impl AddAssign<&ScalarQ3> for ScalarQ3 {
    fn add_assign(&mut self, rhs: &ScalarQ3) {
        self.p += &rhs.p;
        self.q += &rhs.q;
    }
}

impl SubAssign<&ScalarQ3> for ScalarQ3 {
    fn sub_assign(&mut self, rhs: &ScalarQ3) {
        self.p -= &rhs.p;
        self.q -= &rhs.q;
    }
}

impl MulAssign<&ScalarQ3> for ScalarQ3 {
    fn mul_assign(&mut self, rhs: &ScalarQ3) {
        *self = &*self * rhs;
    }
}

impl FromQ3 for ScalarQ3 {
    fn from_q3(x: &ScalarQ3) -> Self {
        x.clone()
    }
}

impl Scalar for ScalarQ3 {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        ScalarQ3::rational(num, den)
    }

    fn sqrt3() -> Self {
        ScalarQ3::sqrt3_multiple(1, 1)
    }

    fn to_f64(&self) -> f64 {
        ScalarQ3::to_f64(self)
    }

    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Serialize for ScalarQ3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ScalarQ3", 2)?;
        st.serialize_field("p", &self.p.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ScalarQ3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: String,
            q: String,
        }
        let raw = Raw::deserialize(d)?;
        let p = BigRational::from_str(raw.p.trim()).map_err(de::Error::custom)?;
        let q = BigRational::from_str(raw.q.trim()).map_err(de::Error::custom)?;
        Ok(ScalarQ3 { p, q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q3(p: (i64, i64), q: (i64, i64)) -> ScalarQ3 {
        ScalarQ3::from_parts(p, q)
    }

    #[test]
    fn multiplication_examples() {
        let r3 = q3((0, 1), (1, 1));
        assert_eq!(&r3 * &r3, ScalarQ3::rational(3, 1));
        let a = q3((1, 1), (1, 1));
        let b = q3((1, 1), (-1, 1));
        assert_eq!(&a * &b, ScalarQ3::rational(-2, 1));
        let half = ScalarQ3::rational(1, 2);
        assert_eq!(&half * &r3, q3((0, 1), (1, 2)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ScalarQ3::rational(2, 1).try_inv().unwrap(), ScalarQ3::rational(1, 2));
        assert_eq!(ScalarQ3::sqrt3_multiple(1, 1).try_inv().unwrap(), q3((0, 1), (1, 3)));
        let x = q3((1, 1), (1, 1));
        let y = x.try_inv().unwrap();
        assert_eq!(y, q3((-1, 2), (1, 2)));
        assert_eq!(&x * &y, ScalarQ3::one());
    }

    #[test]
    fn inverse_of_zero_errors() {
        assert!(matches!(ScalarQ3::zero().try_inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn float_conversion() {
        assert_eq!(ScalarQ3::one().to_f64(), 1.0);
        assert_eq!(ScalarQ3::sqrt3_multiple(1, 1).to_f64(), 1.7320508075688772);
        assert_eq!(ScalarQ3::rational(-2, 1).to_f64(), -2.0);
        assert_eq!(q3((0, 1), (1, 2)).to_f64(), 3f64.sqrt() / 2.0);
    }

    #[test]
    fn canonical_form_and_json() {
        let x = q3((2, 4), (-6, 9));
        assert_eq!(x.p().numer(), &BigInt::from(1));
        assert_eq!(x.p().denom(), &BigInt::from(2));
        assert_eq!(x.q().denom(), &BigInt::from(3));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":"1/2","q":"-2/3"}"#);
        let back: ScalarQ3 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let int: ScalarQ3 = serde_json::from_str(r#"{"p": "0", "q": "1/2"}"#).unwrap();
        assert_eq!(int, q3((0, 1), (1, 2)));
    }

    fn arb_q3() -> impl Strategy<Value = ScalarQ3> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| q3((a, b), (c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_q3(), y in arb_q3(), z in arb_q3()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!(!x.norm().is_zero());
                let inv = x.try_inv().unwrap();
                prop_assert_eq!(&x * &inv, ScalarQ3::one());
            }
        }

        #[test]
        fn float_product_within_4_ulp(x in arb_q3(), y in arb_q3()) {
            let exact = (&x * &y).to_f64();
            let approx = x.to_f64() * y.to_f64();
            let ulp = f64::EPSILON * exact.abs().max(x.to_f64().abs() * y.to_f64().abs()).max(f64::MIN_POSITIVE);
            prop_assert!((exact - approx).abs() <= 4.0 * ulp, "{} vs {}", exact, approx);
        }

        #[test]
        fn json_round_trip(x in arb_q3()) {
            let back: ScalarQ3 = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
