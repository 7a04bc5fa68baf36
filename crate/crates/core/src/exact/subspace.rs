//! Subspaces of `Q^n` stored by their canonical reduced echelon basis.

use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::{format_scalar, Scalar};
use super::ExactError;

/// A subspace of `Q^ambient`. The basis is the unique reduced row echelon form without zero
/// rows, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors (any number, possibly dependent).
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self, ExactError> {
        let m = Matrix::from_rows_with_cols(vectors.to_vec(), ambient)?;
        Ok(Self::from_matrix_rows(&m))
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let ech = m.rref();
        let r = ech.pivots.len();
        Subspace {
            ambient: m.cols(),
            basis: ech.matrix.block(0, 0, r, m.cols()),
            pivots: ech.pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis matrix (one vector per row).
    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), ExactError> {
        if self.ambient != other.ambient {
            return Err(ExactError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(row)) {
                if !b.is_zero() {
                    *x -= &c * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, ExactError> {
        if v.len() != self.ambient {
            return Err(ExactError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    /// Coordinates of a member with respect to the canonical basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient || !self.reduce(v).iter().all(Zero::is_zero) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, ExactError> {
        self.check_ambient(other)?;
        for v in self.basis() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix_rows(
            &self.basis.vstack(&other.basis)?,
        ))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check_ambient(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `{f : f·s = 0 for all s}` under the standard pairing; `dim S + dim S^⊥ = ambient`.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        self.basis.kernel()
    }

    /// Coordinates in the quotient `Q^n / S`, read off the non-pivot positions after reduction.
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.complement_indices()
            .into_iter()
            .map(|j| r[j].clone())
            .collect()
    }

    /// Indices of the standard basis vectors spanning the canonical complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Matrix of the quotient map `Q^n -> Q^n / S`.
    pub fn quotient_map(&self) -> Matrix {
        let comp = self.complement_indices();
        let mut q = Matrix::zeros(comp.len(), self.ambient);
        for j in 0..self.ambient {
            let mut e = vec![Scalar::zero(); self.ambient];
            e[j] = num_traits::One::one();
            for (r, x) in self.quotient_coordinates(&e).into_iter().enumerate() {
                q[(r, j)] = x;
            }
        }
        q
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        if m.cols() != self.ambient {
            return Err(ExactError::DimensionMismatch {
                expected: self.ambient,
                found: m.cols(),
            });
        }
        let images: Vec<Vec<Scalar>> = self.basis().iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &images)
    }

    /// Preimage `{v : m v ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        if m.rows() != self.ambient {
            return Err(ExactError::DimensionMismatch {
                expected: self.ambient,
                found: m.rows(),
            });
        }
        Ok(self.quotient_map().mul(m)?.kernel())
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .basis()
            .iter()
            .map(|r| {
                format!(
                    "({})",
                    r.iter().map(format_scalar).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        write!(f, "span{{{}}} ⊆ Q^{}", rows.join(", "), self.ambient)
    }
}
