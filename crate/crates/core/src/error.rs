use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("algebra mismatch: {left:?} vs {right:?}")]
    AlgebraMismatch {
        left: crate::algebra::AlgebraId,
        right: crate::algebra::AlgebraId,
    },

    #[error("unsupported dimension {0}; expected one of 5, 8, 14, 26")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Weierstrass sum has a nonzero imaginary part (coordinates {nonzero_coords:?})")]
    NonRealWeierstrass { nonzero_coords: Vec<usize> },

    #[error("subspace modes differ")]
    ModeMismatch,

    #[error("module of dimension {dim} requires the slow profile")]
    ModuleTooLarge { dim: usize },

    #[error("level {0} is not regular; need |c| < 1")]
    InvalidLevel(f64),

    #[error("sample {index} did not converge after {iterations} Newton steps (residual {residual:e})")]
    Nonconvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("spherical gradient vanishes at the given point (norm {0:e})")]
    SingularPoint(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
