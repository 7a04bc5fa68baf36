//! Finite truncations of infinite-dimensional carriers: polynomial algebras cut at a total
//! degree, with the grade-preserving operators (linear substitutions and linear vector fields)
//! that survive the cut, and Laurent shifts, which never do.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{zero_vec, Matrix, Scalar};
use crate::walg::{FiniteDimAlgebra, WalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruncationError {
    #[error("generator `{generator}` is not grade preserving")]
    NotGradePreserving { generator: String },
    #[error("generator `{generator}` does not preserve the truncation: {detail}")]
    NotPreserved { generator: String, detail: String },
    #[error("malformed truncation data: {0}")]
    Shape(String),
    #[error(transparent)]
    Walg(#[from] WalgError),
}

/// `k[x_1..x_n]` modulo all monomials of total degree above `degree`.
#[derive(Clone, Debug)]
pub struct PolynomialTruncation {
    variables: Vec<String>,
    degree: usize,
    monomials: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    algebra: FiniteDimAlgebra,
}

fn exponents_of_degree(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial_label(vars: &[String], e: &[usize]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| {
            if k == 1 {
                v.clone()
            } else {
                format!("{v}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl PolynomialTruncation {
    /// Basis: monomials ordered by degree, then with higher powers of earlier variables first.
    pub fn new(variables: Vec<String>, degree: usize) -> Result<Self, TruncationError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &variables {
            if v.is_empty() || v == "1" || !seen.insert(v) {
                return Err(TruncationError::Shape(format!(
                    "invalid or repeated variable name `{v}`"
                )));
            }
        }
        let n = variables.len();
        let monomials: Vec<Vec<usize>> = (0..=degree)
            .flat_map(|d| exponents_of_degree(n, d))
            .collect();
        let index: BTreeMap<Vec<usize>, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let labels: Vec<String> = monomials
            .iter()
            .map(|m| monomial_label(&variables, m))
            .collect();
        let mut entries = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let sum: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = index.get(&sum) {
                    entries.push((i, j, k, Scalar::one()));
                }
            }
        }
        let mut unit = zero_vec(monomials.len());
        unit[0] = Scalar::one();
        let algebra = FiniteDimAlgebra::new(labels, entries, unit)?;
        Ok(PolynomialTruncation {
            variables,
            degree,
            monomials,
            index,
            algebra,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.algebra
    }

    pub fn monomial_index(&self, exponents: &[usize]) -> Option<usize> {
        self.index.get(exponents).copied()
    }

    /// Coordinates of the variable `x_i`.
    pub fn variable(&self, i: usize) -> Vec<Scalar> {
        let mut e = vec![0; self.variables.len()];
        e[i] = 1;
        let mut v = zero_vec(self.dim());
        if let Some(k) = self.monomial_index(&e) {
            v[k] = Scalar::one();
        }
        v
    }

    fn homogeneous_linear(&self, v: &[Scalar]) -> bool {
        v.iter()
            .zip(&self.monomials)
            .all(|(c, m)| c.is_zero() || m.iter().sum::<usize>() == 1)
    }

    /// The algebra endomorphism `x_i -> Σ_j m[j][i] x_j`, i.e. column `i` of `m` is the image of
    /// `x_i` in the variable basis.
    pub fn linear_substitution(&self, m: &Matrix) -> Result<Matrix, TruncationError> {
        let n = self.variables.len();
        if m.rows() != n || m.cols() != n {
            return Err(TruncationError::Shape(format!(
                "substitution must be {n}x{n}"
            )));
        }
        let images: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut v = zero_vec(self.dim());
                for j in 0..n {
                    crate::exact::axpy(&mut v, &m[(j, i)], &self.variable(j));
                }
                v
            })
            .collect();
        let mut cols = Vec::with_capacity(self.dim());
        for mono in &self.monomials {
            let mut acc = self.algebra.unit().to_vec();
            for (i, &k) in mono.iter().enumerate() {
                for _ in 0..k {
                    acc = self.algebra.mul(&acc, &images[i]);
                }
            }
            cols.push(acc);
        }
        Ok(Matrix::from_columns(self.dim(), &cols).expect("square"))
    }

    /// The derivation `Σ_i f_i ∂/∂x_i`. Each `f_i` must be a linear form, which is exactly the
    /// grade-preserving case.
    pub fn vector_field(
        &self,
        generator: &str,
        coefficients: &[Vec<Scalar>],
    ) -> Result<Matrix, TruncationError> {
        let n = self.variables.len();
        if coefficients.len() != n || coefficients.iter().any(|f| f.len() != self.dim()) {
            return Err(TruncationError::Shape(format!(
                "vector field `{generator}` needs {n} coefficient vectors"
            )));
        }
        if !coefficients.iter().all(|f| self.homogeneous_linear(f)) {
            return Err(TruncationError::NotGradePreserving {
                generator: generator.to_string(),
            });
        }
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (col, mono) in self.monomials.iter().enumerate() {
            let mut image = zero_vec(self.dim());
            for (i, f) in coefficients.iter().enumerate() {
                if mono[i] == 0 {
                    continue;
                }
                let mut lowered = mono.clone();
                lowered[i] -= 1;
                let k = self
                    .monomial_index(&lowered)
                    .expect("lower degree monomial exists");
                let mut basis = zero_vec(self.dim());
                basis[k] = Scalar::from_integer(mono[i].into());
                crate::exact::axpy(&mut image, &Scalar::one(), &self.algebra.mul(f, &basis));
            }
            for (r, c) in image.into_iter().enumerate() {
                out[(r, col)] = c;
            }
        }
        Ok(out)
    }

    /// `x_i ∂/∂x_j`.
    pub fn elementary_field(&self, i: usize, j: usize) -> Matrix {
        let mut coeffs = vec![zero_vec(self.dim()); self.variables.len()];
        coeffs[j] = self.variable(i);
        let name = format!("{}d{}", self.variables[i], self.variables[j]);
        self.vector_field(&name, &coeffs)
            .expect("linear coefficients")
    }

    /// Projection onto a lower truncation with the same variables.
    pub fn projection_to(&self, lower: &PolynomialTruncation) -> Result<Matrix, TruncationError> {
        if lower.variables != self.variables || lower.degree > self.degree {
            return Err(TruncationError::Shape(
                "projection needs the same variables and a lower degree".into(),
            ));
        }
        let mut p = Matrix::zeros(lower.dim(), self.dim());
        for (j, m) in self.monomials.iter().enumerate() {
            if let Some(i) = lower.monomial_index(m) {
                p[(i, j)] = Scalar::one();
            }
        }
        Ok(p)
    }
}

/// Multiplication by `t^shift` on `span{t^min, ..., t^max}` inside `k[t, t⁻¹]`. Any nonzero shift
/// pushes an end of the window outside it, and is rejected.
pub fn laurent_shift(
    min: i64,
    max: i64,
    shift: i64,
    generator: &str,
) -> Result<Matrix, TruncationError> {
    if min > max {
        return Err(TruncationError::Shape(format!(
            "empty Laurent window {min}..{max}"
        )));
    }
    let n = (max - min + 1) as usize;
    let mut out = Matrix::zeros(n, n);
    for (j, k) in (min..=max).enumerate() {
        let target = k + shift;
        if target < min || target > max {
            return Err(TruncationError::NotPreserved {
                generator: generator.to_string(),
                detail: format!("t^{k} is sent to t^{target}, outside degrees {min}..{max}"),
            });
        }
        out[((target - min) as usize, j)] = Scalar::one();
    }
    Ok(out)
}
