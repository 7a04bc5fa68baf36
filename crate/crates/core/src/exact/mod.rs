//! Exact rational linear algebra: scalars, dense matrices, subspaces and polynomials.

mod matrix;
mod poly;
mod scalar;
mod subspace;

pub use matrix::{Echelon, Matrix};
pub use poly::Poly;
pub use scalar::*;
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
