//! The normed division algebras R, C, H, O over an arbitrary coefficient ring.
//!
//! Units are ordered `(1, i, j, k, p, q, r, s)`.  The octonions are the
//! Cayley-Dickson double of the quaternions with
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`, and the units
//! `p, q, r, s` are `(0, 1), (0, i), (0, j), (0, k)`.  Every smaller algebra
//! is the prefix of this table, so one 8x8 table serves all four.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Ring;

pub const UNIT_NAMES: [&str; 8] = ["1", "i", "j", "k", "p", "q", "r", "s"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlgebraId {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 4] = [
        AlgebraId::Real,
        AlgebraId::Complex,
        AlgebraId::Quaternion,
        AlgebraId::Octonion,
    ];

    pub fn dim(self) -> usize {
        match self {
            AlgebraId::Real => 1,
            AlgebraId::Complex => 2,
            AlgebraId::Quaternion => 4,
            AlgebraId::Octonion => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Option<Self> {
        match dim {
            1 => Some(AlgebraId::Real),
            2 => Some(AlgebraId::Complex),
            4 => Some(AlgebraId::Quaternion),
            8 => Some(AlgebraId::Octonion),
            _ => None,
        }
    }
}

/// `e_a * e_b = sign * e_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub sign: i8,
    pub index: u8,
}

pub fn mul_table() -> &'static [[TableEntry; 8]; 8] {
    static TABLE: OnceLock<[[TableEntry; 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[TableEntry { sign: 0, index: 0 }; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let mut x = [0i32; 8];
                let mut y = [0i32; 8];
                x[a] = 1;
                y[b] = 1;
                let z = cayley_dickson_mul(&x, &y);
                let (idx, v) = z
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0)
                    .map(|(i, v)| (i, *v))
                    .expect("basis product is a signed basis unit");
                debug_assert_eq!(z.iter().filter(|v| **v != 0).count(), 1);
                t[a][b] = TableEntry {
                    sign: v as i8,
                    index: idx as u8,
                };
            }
        }
        t
    })
}

fn cd_conj(x: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = x.iter().map(|v| -v).collect();
    out[0] = x[0];
    out
}

fn cayley_dickson_mul(x: &[i32], y: &[i32]) -> Vec<i32> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cayley_dickson_mul(a, c);
    let db = cayley_dickson_mul(&cd_conj(d), b);
    let da = cayley_dickson_mul(d, a);
    let bc = cayley_dickson_mul(b, &cd_conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&db).map(|(u, v)| u - v));
    out.extend(da.iter().zip(&bc).map(|(u, v)| u + v));
    out
}

/// Element of one of the four algebras with coefficients in `R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgElement<R> {
    pub algebra: AlgebraId,
    pub coords: Vec<R>,
}

impl<R: Ring> AlgElement<R> {
    pub fn new(algebra: AlgebraId, coords: Vec<R>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: coords.len(),
            });
        }
        Ok(AlgElement { algebra, coords })
    }

    pub fn zero(algebra: AlgebraId) -> Self {
        AlgElement {
            algebra,
            coords: vec![R::zero(); algebra.dim()],
        }
    }

    pub fn real(algebra: AlgebraId, value: R) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[0] = value;
        e
    }

    /// The unit `e_index` (0 = 1, 1 = i, ...).
    pub fn unit(algebra: AlgebraId, index: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[index] = R::one();
        e
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch {
                left: self.algebra,
                right: other.algebra,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let table = mul_table();
        let dim = self.algebra.dim();
        let mut out = vec![R::zero(); dim];
        for (a, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let e = table[a][b];
                let prod = x.clone() * y.clone();
                let slot = &mut out[e.index as usize];
                *slot = if e.sign > 0 {
                    slot.clone() + prod
                } else {
                    slot.clone() - prod
                };
            }
        }
        AlgElement {
            algebra: self.algebra,
            coords: out,
        }
    }

    pub fn conj(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() })
            .collect();
        AlgElement {
            algebra: self.algebra,
            coords,
        }
    }

    /// Sum of squares of the coordinates.
    pub fn norm2(&self) -> R {
        self.coords.iter().fold(R::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn re(&self) -> R {
        self.coords[0].clone()
    }

    pub fn is_real(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &R) -> Self {
        AlgElement {
            algebra: self.algebra,
            coords: self.coords.iter().map(|c| k.clone() * c.clone()).collect(),
        }
    }

    pub fn map<T, F: Fn(&R) -> T>(&self, f: F) -> AlgElement<T> {
        AlgElement {
            algebra: self.algebra,
            coords: self.coords.iter().map(f).collect(),
        }
    }
}

impl<R: Ring> std::ops::Add for AlgElement<R> {
    type Output = AlgElement<R>;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.algebra, rhs.algebra);
        AlgElement {
            algebra: self.algebra,
            coords: self.coords.into_iter().zip(rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<R: Ring> std::ops::Sub for AlgElement<R> {
    type Output = AlgElement<R>;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.algebra, rhs.algebra);
        AlgElement {
            algebra: self.algebra,
            coords: self.coords.into_iter().zip(rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Panics on mismatched algebras; [`AlgElement::try_mul`] reports it instead.
impl<R: Ring> std::ops::Mul for &AlgElement<R> {
    type Output = AlgElement<R>;
    fn mul(self, rhs: Self) -> AlgElement<R> {
        self.try_mul(rhs).expect("algebra mismatch")
    }
}
