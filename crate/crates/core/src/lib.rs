//! Exact and numerical toolkit for the symmetric cubic tensors `Y` on
//! R^5, R^8, R^14 and R^26 built from determinants of traceless Hermitian
//! 3x3 matrices over R, C, H and O.
//!
//! Most of the crate is generic over the scalar type: [`ScalarQ3`] gives
//! exact arithmetic in Q(sqrt 3), `f64` gives floating point.

pub mod algebra;
pub mod connection;
pub mod cubic;
pub mod decompose;
pub mod error;
pub mod forms;
pub mod grading;
pub mod isoparametric;
pub mod lie;
pub mod linalg;
pub mod magic;
pub mod poly;
pub mod q3;
pub mod scalar;
pub mod subspace;
pub mod tensor;
pub mod upsilon;

pub use algebra::{AlgElement, AlgebraId};
pub use cubic::{build_hermitian, det3, upsilon_from_cubic, DetMethod, Herm3, PointVec};
pub use error::{Error, Result};
pub use lie::SkewMatrix;
pub use q3::ScalarQ3;
pub use scalar::{FromQ3, Ring, Scalar};
pub use subspace::{DynSubspace, Mode, Subspace};
pub use tensor::{ConnElement, Sym4Tensor, SymTensor, ThreeForm, UpsilonTensor};
pub use upsilon::{evaluate_cubic, verify_identities, IdentityReport};

pub type ExactUpsilon = UpsilonTensor<ScalarQ3>;
pub type FloatUpsilon = UpsilonTensor<f64>;
pub type ExactSubspace = Subspace<ScalarQ3>;
pub type FloatSubspace = Subspace<f64>;
pub type ExactConn = ConnElement<ScalarQ3>;
pub type FloatConn = ConnElement<f64>;
pub type ExactAlgElement = AlgElement<ScalarQ3>;
