//! Dense rational matrices with exact Gaussian elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::scalar::{axpy, format_scalar, int, Scalar};
use super::subspace::Subspace;
use super::ExactError;

/// Row-major rational matrix. Dimensions are fixed at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds from explicit rows. All rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Matrix::from_rows`] but fixes the column count, so an empty row list still has a width.
    pub fn from_rows_with_cols(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(ExactError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds from columns of equal length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self, ExactError> {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(ExactError::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let vecs = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Self::from_rows(vecs).expect("ragged integer matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = other.row(k);
                let target = &mut out.data[i * other.cols..(i + 1) * other.cols];
                axpy(target, a, row);
            }
        }
        Ok(out)
    }

    /// Matrix product for callers that have already matched shapes.
    pub fn dot(&self, other: &Matrix) -> Matrix {
        self.mul(other).expect("matrix shapes checked by caller")
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ExactError> {
        if self.cols != v.len() {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |s, (a, b)| s + a * b)
            })
            .collect())
    }

    /// Matrix-vector product for callers that have already matched shapes.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mul_vec(v).expect("vector length checked by caller")
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// Commutator `AB - BA` of square matrices of equal size.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn same_shape(&self, other: &Matrix) -> Result<(), ExactError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Kronecker product with row index `(i,k) -> i*rows(N)+k` and column index `(j,l) -> j*cols(N)+l`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        if self.cols != other.cols {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Copies the block with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        let mut out = Matrix::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    /// Writes `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Matrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)].clone();
            }
        }
    }

    /// Reduced row echelon form by exact Gauss-Jordan elimination.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    let v = &m[(r, j)] * &inv;
                    m[(r, j)] = v;
                }
            }
            let pivot_row: Vec<Scalar> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                let start = i * m.cols + c;
                for (offset, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        m.data[start + offset] -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Null space `{x : Mx = 0}`.
    pub fn kernel(&self) -> Subspace {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                v[p] = -ech.matrix[(r, free)].clone();
            }
            basis.push(v);
        }
        Subspace::span(self.cols, &basis).expect("kernel vectors have the ambient length")
    }

    /// Column space, i.e. the image of the map `x -> Mx`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, &self.columns()).expect("columns have the row count as length")
    }

    /// Some `x` with `Mx = b`, or `None`. The answer is re-verified before it is returned.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug[(i, self.cols)] = x.clone();
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.matrix[(r, self.cols)].clone();
        }
        if self.mul_vec(&x)? != b {
            return Err(ExactError::Internal(
                "solution failed re-verification".into(),
            ));
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(n));
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(ExactError::Singular);
        }
        Ok(ech.matrix.block(0, n, n, n))
    }

    /// Determinant by fraction-exact elimination.
    pub fn determinant(&self) -> Result<Scalar, ExactError> {
        if !self.is_square() {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &f * &m[(c, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    /// Entries flattened row-major, as used when matrices are treated as vectors.
    pub fn to_flat(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
