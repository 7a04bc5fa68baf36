//! Structure-constant presentations of algebras, coalgebras and weak Hopf algebras, with the
//! axiom-checking suite and the counital maps.
//!
//! Conventions: a linear map `f: H -> H` is stored as the matrix whose column `j` holds the
//! coordinates of `f(b_j)`. Elements of `H^{⊗k}` are sparse [`Tensor`]s keyed by basis-index
//! tuples.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{axpy, unit_vec, zero_vec, ExactError, Matrix, Scalar, Subspace};
use crate::report::{Check, Report, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalgError {
    #[error("malformed structure data: {0}")]
    Shape(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("label collision across summands: `{0}`")]
    LabelCollision(String),
    #[error("algebra and coalgebra do not share a basis")]
    LabelMismatch,
    #[error("antipode is not invertible")]
    SingularAntipode,
    #[error("an antipode is required for this operation")]
    MissingAntipode,
    #[error("direct sum of an empty list")]
    EmptySum,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Sparse element of a tensor power, keyed by basis-index tuples.
pub type Tensor = BTreeMap<Vec<usize>, Scalar>;

fn add_term(t: &mut Tensor, key: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

/// `a - b`, dropping zero entries.
pub fn tensor_sub(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = a.clone();
    for (k, v) in b {
        add_term(&mut out, k.clone(), -v.clone());
    }
    out
}

/// `v_1 ⊗ ... ⊗ v_k` for dense vectors.
pub fn tensor_of(vectors: &[&[Scalar]]) -> Tensor {
    let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
    for v in vectors {
        let mut next = Vec::new();
        for (key, c) in &partial {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    let mut k = key.clone();
                    k.push(i);
                    next.push((k, c * x));
                }
            }
        }
        partial = next;
    }
    partial.into_iter().collect()
}

/// Sparse residual entries labelled `a⊗b⊗...`.
pub fn tensor_residual(t: &Tensor, labels: &[String]) -> Vec<(String, Scalar)> {
    t.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            (
                k.iter()
                    .map(|&i| labels[i].as_str())
                    .collect::<Vec<_>>()
                    .join("⊗"),
                c.clone(),
            )
        })
        .collect()
}

fn check_labels(labels: &[String]) -> Result<(), WalgError> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(WalgError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn normalize_terms<K: Ord + Clone>(
    terms: impl IntoIterator<Item = (K, Scalar)>,
) -> Vec<(K, Scalar)> {
    let mut acc: BTreeMap<K, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Associative-algebra candidate: `b_i b_j = Σ_k m[i][j][k] b_k` with unit vector `u`.
/// Only the shape is validated here; the axioms are checked by [`check_algebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Vec<Scalar>,
}

impl FiniteDimAlgebra {
    /// Builds from `(i, j, k, m[i][j][k])` entries; repeated entries are summed.
    pub fn new(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Vec<Scalar>,
    ) -> Result<Self, WalgError> {
        check_labels(&labels)?;
        let n = labels.len();
        if unit.len() != n {
            return Err(WalgError::Shape(format!(
                "unit has length {} but dim is {n}",
                unit.len()
            )));
        }
        let mut raw: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n * n];
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(WalgError::Shape(format!(
                    "structure index ({i},{j},{k}) out of range for dim {n}"
                )));
            }
            raw[i * n + j].push((k, c));
        }
        let table = raw.into_iter().map(normalize_terms).collect();
        Ok(FiniteDimAlgebra {
            labels,
            table,
            unit,
        })
    }

    /// Builds from a product rule on basis indices returning dense vectors.
    pub fn from_fn(
        labels: Vec<String>,
        unit: Vec<Scalar>,
        product: impl Fn(usize, usize) -> Vec<Scalar>,
    ) -> Result<Self, WalgError> {
        let n = labels.len();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                if v.len() != n {
                    return Err(WalgError::Shape(format!(
                        "product b_{i}b_{j} has length {}",
                        v.len()
                    )));
                }
                entries.extend(v.into_iter().enumerate().map(|(k, c)| (i, j, k, c)));
            }
        }
        Self::new(labels, entries, unit)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Nonzero structure constants of `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    /// All nonzero structure constants as `(i, j, k, m[i][j][k])`, in index order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.product(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.dim(), i)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.product(i, j) {
                    out[*k] += &xy * c;
                }
            }
        }
        out
    }

    /// Dense coordinates of `b_i b_j`.
    pub fn product_vec(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        for (k, c) in self.product(i, j) {
            out[*k] += c;
        }
        out
    }

    /// `b_i · v`
    pub fn mul_basis_left(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        for (j, y) in v.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for (k, c) in self.product(i, j) {
                out[*k] += y * c;
            }
        }
        out
    }

    /// `v · b_j`
    pub fn mul_basis_right(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in self.product(i, j) {
                out[*k] += x * c;
            }
        }
        out
    }

    /// Matrix of `x -> a x`.
    pub fn left_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| self.mul_basis_right(a, j))
            .collect();
        Matrix::from_columns(self.dim(), &cols).expect("square by construction")
    }

    /// Matrix of `x -> x a`.
    pub fn right_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|i| self.mul_basis_left(i, a)).collect();
        Matrix::from_columns(self.dim(), &cols).expect("square by construction")
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Products in `H^{⊗k}` computed slotwise.
    pub fn tensor_mul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (kx, cx) in x {
            for (ky, cy) in y {
                let mut partial: Vec<(Vec<usize>, Scalar)> =
                    vec![(Vec::with_capacity(kx.len()), cx * cy)];
                for (a, b) in kx.iter().zip(ky) {
                    let prods = self.product(*a, *b);
                    let mut next = Vec::with_capacity(partial.len() * prods.len());
                    for (key, c) in &partial {
                        for (p, m) in prods {
                            let mut k = key.clone();
                            k.push(*p);
                            next.push((k, c * m));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    add_term(&mut out, k, c);
                }
            }
        }
        out
    }

    /// Direct sum with block-diagonal structure constants. Labels must be disjoint.
    pub fn direct_sum(parts: &[&FiniteDimAlgebra]) -> Result<FiniteDimAlgebra, WalgError> {
        let mut labels = Vec::new();
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        let mut unit = Vec::new();
        let mut offset = 0;
        for a in parts {
            for l in a.labels() {
                if !seen.insert(l.clone()) {
                    return Err(WalgError::LabelCollision(l.clone()));
                }
                labels.push(l.clone());
            }
            for (i, j, k, c) in a.entries() {
                entries.push((i + offset, j + offset, k + offset, c));
            }
            unit.extend(a.unit().iter().cloned());
            offset += a.dim();
        }
        FiniteDimAlgebra::new(labels, entries, unit)
    }

    /// Quotient by a two-sided ideal. Returns the quotient algebra (basis = canonical complement
    /// of the ideal, labelled by the surviving basis labels) and the projection matrix.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(FiniteDimAlgebra, Matrix), WalgError> {
        let comp = ideal.complement_indices();
        let proj = ideal.quotient_map();
        let labels: Vec<String> = comp.iter().map(|&j| self.labels[j].clone()).collect();
        let unit = proj.apply(&self.unit);
        let q = FiniteDimAlgebra::from_fn(labels, unit, |a, b| {
            proj.apply(&self.mul(&self.basis_vec(comp[a]), &self.basis_vec(comp[b])))
        })?;
        Ok((q, proj))
    }

    /// Restriction to a subspace closed under multiplication, with `unit` (an element of `sub`)
    /// as its identity. Returns the algebra on the canonical basis of `sub` and the embedding.
    pub fn restrict(
        &self,
        sub: &Subspace,
        unit: &[Scalar],
        labels: Vec<String>,
    ) -> Result<(FiniteDimAlgebra, Matrix), WalgError> {
        let basis = sub.basis();
        let embed = Matrix::from_columns(self.dim(), &basis)?;
        let coords = |v: &[Scalar]| {
            sub.coordinates(v).ok_or_else(|| {
                WalgError::Shape("subspace is not closed under multiplication".into())
            })
        };
        let mut entries = Vec::new();
        for (a, va) in basis.iter().enumerate() {
            for (b, vb) in basis.iter().enumerate() {
                for (k, c) in coords(&self.mul(va, vb))?.into_iter().enumerate() {
                    entries.push((a, b, k, c));
                }
            }
        }
        let u = coords(unit)?;
        Ok((FiniteDimAlgebra::new(labels, entries, u)?, embed))
    }

    /// Span of all products `s t` (s ∈ S, t ∈ T).
    pub fn product_space(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                vs.push(self.mul(&a, &b));
            }
        }
        Subspace::span(self.dim(), &vs).expect("products live in the ambient space")
    }

    /// Smallest subalgebra (closed under products) containing `s`; no unit is adjoined.
    pub fn multiplicative_closure(&self, s: &Subspace) -> Subspace {
        let mut cur = s.clone();
        loop {
            let next = cur
                .sum(&self.product_space(&cur, &cur))
                .expect("same ambient");
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }

    /// Two-sided ideal generated by `gens`, via `V <- V + HV + VH` until the dimension is stable.
    pub fn ideal_closure(&self, gens: &Subspace) -> Subspace {
        let n = self.dim();
        let mut cur = gens.clone();
        loop {
            let mut vs = cur.basis();
            for v in cur.basis() {
                for i in 0..n {
                    vs.push(self.mul_basis_left(i, &v));
                    vs.push(self.mul_basis_right(&v, i));
                }
            }
            let next = Subspace::span(n, &vs).expect("same ambient");
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }
}

/// Coalgebra candidate: `Δ(b_i) = Σ c b_j ⊗ b_k` and counit vector `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimCoalgebra {
    labels: Vec<String>,
    comult: Vec<Vec<((usize, usize), Scalar)>>,
    counit: Vec<Scalar>,
}

impl FiniteDimCoalgebra {
    /// Builds from `(i, j, k, c)` entries meaning `Δ(b_i) ∋ c b_j⊗b_k`.
    pub fn new(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        counit: Vec<Scalar>,
    ) -> Result<Self, WalgError> {
        check_labels(&labels)?;
        let n = labels.len();
        if counit.len() != n {
            return Err(WalgError::Shape(format!(
                "counit has length {} but dim is {n}",
                counit.len()
            )));
        }
        let mut raw: Vec<Vec<((usize, usize), Scalar)>> = vec![Vec::new(); n];
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(WalgError::Shape(format!(
                    "comultiplication index ({i},{j},{k}) out of range for dim {n}"
                )));
            }
            raw[i].push(((j, k), c));
        }
        let comult = raw.into_iter().map(normalize_terms).collect();
        Ok(FiniteDimCoalgebra {
            labels,
            comult,
            counit,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    /// Nonzero terms of `Δ(b_i)`.
    pub fn delta_basis(&self, i: usize) -> &[((usize, usize), Scalar)] {
        &self.comult[i]
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (i, terms) in self.comult.iter().enumerate() {
            for ((j, k), c) in terms {
                out.push((i, *j, *k, c.clone()));
            }
        }
        out
    }

    pub fn delta(&self, v: &[Scalar]) -> Tensor {
        let mut t = Tensor::new();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for ((j, k), c) in self.delta_basis(i) {
                add_term(&mut t, vec![*j, *k], x * c);
            }
        }
        t
    }

    /// `(Δ⊗id)Δ(v)`
    pub fn delta2(&self, v: &[Scalar]) -> Tensor {
        let mut t = Tensor::new();
        for (key, c) in self.delta(v) {
            for ((p, q), d) in self.delta_basis(key[0]) {
                add_term(&mut t, vec![*p, *q, key[1]], &c * d);
            }
        }
        t
    }

    pub fn eps(&self, v: &[Scalar]) -> Scalar {
        crate::exact::dot(&self.counit, v)
    }

    /// Direct sum with blockwise Δ and ε.
    pub fn direct_sum(parts: &[&FiniteDimCoalgebra]) -> Result<FiniteDimCoalgebra, WalgError> {
        let mut labels = Vec::new();
        let mut entries = Vec::new();
        let mut counit = Vec::new();
        let mut seen = BTreeSet::new();
        let mut offset = 0;
        for c in parts {
            for l in c.labels() {
                if !seen.insert(l.clone()) {
                    return Err(WalgError::LabelCollision(l.clone()));
                }
                labels.push(l.clone());
            }
            for (i, j, k, x) in c.entries() {
                entries.push((i + offset, j + offset, k + offset, x));
            }
            counit.extend(c.counit().iter().cloned());
            offset += c.dim();
        }
        FiniteDimCoalgebra::new(labels, entries, counit)
    }
}

/// `(H, m, u, Δ, ε, S)` on one shared basis. `S` is optional for weak bialgebras and must be
/// invertible when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakHopfPresentation {
    algebra: FiniteDimAlgebra,
    coalgebra: FiniteDimCoalgebra,
    antipode: Option<Matrix>,
}

impl WeakHopfPresentation {
    pub fn new(
        algebra: FiniteDimAlgebra,
        coalgebra: FiniteDimCoalgebra,
        antipode: Option<Matrix>,
    ) -> Result<Self, WalgError> {
        if algebra.labels() != coalgebra.labels() {
            return Err(WalgError::LabelMismatch);
        }
        if let Some(s) = &antipode {
            let n = algebra.dim();
            if s.rows() != n || s.cols() != n {
                return Err(WalgError::Shape(format!(
                    "antipode is {}x{} but dim is {n}",
                    s.rows(),
                    s.cols()
                )));
            }
            if s.determinant()?.is_zero() {
                return Err(WalgError::SingularAntipode);
            }
        }
        Ok(WeakHopfPresentation {
            algebra,
            coalgebra,
            antipode,
        })
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.algebra
    }

    pub fn coalgebra(&self) -> &FiniteDimCoalgebra {
        &self.coalgebra
    }

    pub fn antipode(&self) -> Option<&Matrix> {
        self.antipode.as_ref()
    }

    pub fn require_antipode(&self) -> Result<&Matrix, WalgError> {
        self.antipode.as_ref().ok_or(WalgError::MissingAntipode)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn unit(&self) -> &[Scalar] {
        self.algebra.unit()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.algebra.mul(a, b)
    }

    pub fn delta(&self, v: &[Scalar]) -> Tensor {
        self.coalgebra.delta(v)
    }

    pub fn eps(&self, v: &[Scalar]) -> Scalar {
        self.coalgebra.eps(v)
    }

    /// The same structure on a permuted basis, listed by label. Used for canonical comparisons.
    pub fn with_basis_order(&self, order: &[String]) -> Result<WeakHopfPresentation, WalgError> {
        let n = self.dim();
        let position: BTreeMap<&str, usize> = order
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if order.len() != n || position.len() != n {
            return Err(WalgError::Shape(
                "basis order is not a permutation of the labels".into(),
            ));
        }
        let mut perm = Vec::with_capacity(n);
        for l in self.labels() {
            perm.push(
                *position
                    .get(l.as_str())
                    .ok_or_else(|| WalgError::Shape(format!("unknown label `{l}`")))?,
            );
        }
        let alg = FiniteDimAlgebra::new(
            order.to_vec(),
            self.algebra
                .entries()
                .into_iter()
                .map(|(i, j, k, c)| (perm[i], perm[j], perm[k], c)),
            permute_vec(self.unit(), &perm),
        )?;
        let coalg = FiniteDimCoalgebra::new(
            order.to_vec(),
            self.coalgebra
                .entries()
                .into_iter()
                .map(|(i, j, k, c)| (perm[i], perm[j], perm[k], c)),
            permute_vec(self.coalgebra.counit(), &perm),
        )?;
        let s = self.antipode.as_ref().map(|s| {
            let mut t = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    t[(perm[i], perm[j])] = s[(i, j)].clone();
                }
            }
            t
        });
        WeakHopfPresentation::new(alg, coalg, s)
    }
}

fn permute_vec(v: &[Scalar], perm: &[usize]) -> Vec<Scalar> {
    let mut out = zero_vec(v.len());
    for (i, x) in v.iter().enumerate() {
        out[perm[i]] = x.clone();
    }
    out
}

fn basis_pair_label(labels: &[String], idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| labels[i].clone()).collect()
}

/// Associativity on all basis triples and two-sided unitality of `u`.
pub fn check_algebra(a: &FiniteDimAlgebra) -> Report {
    let n = a.dim();
    let labels = a.labels();
    let products: Vec<Vec<Scalar>> = (0..n * n)
        .map(|ij| a.mul(&a.basis_vec(ij / n), &a.basis_vec(ij % n)))
        .collect();
    let parts: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("associativity");
            for j in 0..n {
                for k in 0..n {
                    let left = a.mul_basis_right(&products[i * n + j], k);
                    let right = a.mul_basis_left(i, &products[j * n + k]);
                    let diff = crate::exact::sub_vec(&left, &right);
                    c.record(crate::exact::is_zero_vec(&diff), || {
                        Witness::new(basis_pair_label(labels, &[i, j, k])).residual(labels, &diff)
                    });
                }
            }
            c
        })
        .collect();
    let mut assoc = Check::new("associativity");
    for p in parts {
        assoc.absorb(p);
    }
    let mut unital = Check::new("unitality");
    for i in 0..n {
        let b = a.basis_vec(i);
        for (side, v) in [
            ("left", a.mul(a.unit(), &b)),
            ("right", a.mul(&b, a.unit())),
        ] {
            let diff = crate::exact::sub_vec(&v, &b);
            unital.record(crate::exact::is_zero_vec(&diff), || {
                Witness::new([labels[i].clone(), side.to_string()]).residual(labels, &diff)
            });
        }
    }
    Report {
        checks: vec![assoc, unital],
    }
}

/// Coassociativity and both counit laws on every basis element.
pub fn check_coalgebra(c: &FiniteDimCoalgebra) -> Report {
    let n = c.dim();
    let labels = c.labels();
    let mut coassoc = Check::new("coassociativity");
    let mut counit = Check::new("counit");
    for i in 0..n {
        let mut left = Tensor::new();
        let mut right = Tensor::new();
        for ((j, k), x) in c.delta_basis(i) {
            for ((p, q), y) in c.delta_basis(*j) {
                add_term(&mut left, vec![*p, *q, *k], x * y);
            }
            for ((p, q), y) in c.delta_basis(*k) {
                add_term(&mut right, vec![*j, *p, *q], x * y);
            }
        }
        let diff = tensor_sub(&left, &right);
        coassoc.record(diff.is_empty(), || {
            Witness::new([labels[i].clone()]).sparse_residual(tensor_residual(&diff, labels))
        });
        let mut left_eps = zero_vec(n);
        let mut right_eps = zero_vec(n);
        for ((j, k), x) in c.delta_basis(i) {
            left_eps[*k] += x * &c.counit()[*j];
            right_eps[*j] += x * &c.counit()[*k];
        }
        let b = unit_vec(n, i);
        for (side, v) in [("left", left_eps), ("right", right_eps)] {
            let diff = crate::exact::sub_vec(&v, &b);
            counit.record(crate::exact::is_zero_vec(&diff), || {
                Witness::new([labels[i].clone(), side.to_string()]).residual(labels, &diff)
            });
        }
    }
    Report {
        checks: vec![coassoc, counit],
    }
}

/// `ε(b_i b_j)` for all pairs.
fn counit_pairing(h: &WeakHopfPresentation) -> Matrix {
    let n = h.dim();
    let mut e = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = h
                .algebra
                .product(i, j)
                .iter()
                .fold(Scalar::zero(), |s, (k, c)| {
                    s + c * &h.coalgebra.counit()[*k]
                });
            e[(i, j)] = v;
        }
    }
    e
}

/// Multiplicativity of Δ, the weak counit identity and weak comultiplicativity of the unit.
///
/// The weak counit identity is trilinear in `(a, b, c)`, so checking it on basis triples covers
/// all of `H×H×H`.
pub fn check_weak_bialgebra(h: &WeakHopfPresentation) -> Report {
    let n = h.dim();
    let labels = h.labels();
    let alg = &h.algebra;
    let coalg = &h.coalgebra;
    let deltas: Vec<Tensor> = (0..n).map(|i| coalg.delta(&unit_vec(n, i))).collect();

    let parts: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("comultiplicativity");
            for j in 0..n {
                let left = coalg.delta(&alg.mul(&unit_vec(n, i), &unit_vec(n, j)));
                let right = alg.tensor_mul(&deltas[i], &deltas[j]);
                let diff = tensor_sub(&left, &right);
                c.record(diff.is_empty(), || {
                    Witness::new(basis_pair_label(labels, &[i, j]))
                        .sparse_residual(tensor_residual(&diff, labels))
                });
            }
            c
        })
        .collect();
    let mut comult = Check::new("comultiplicativity");
    for p in parts {
        comult.absorb(p);
    }

    let e = counit_pairing(h);
    let parts: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("weak_counit");
            for j in 0..n {
                let ij = alg.product(i, j);
                for k in 0..n {
                    let abc = ij
                        .iter()
                        .fold(Scalar::zero(), |s, (p, m)| s + m * &e[(*p, k)]);
                    let mut first = Scalar::zero();
                    let mut second = Scalar::zero();
                    for ((p, q), x) in coalg.delta_basis(j) {
                        first += x * &e[(i, *p)] * &e[(*q, k)];
                        second += x * &e[(i, *q)] * &e[(*p, k)];
                    }
                    let ok = abc == first && abc == second;
                    c.record(ok, || {
                        Witness::new(basis_pair_label(labels, &[i, j, k])).sparse_residual(vec![
                            ("ε(abc)-ε(ab₁)ε(b₂c)".to_string(), &abc - &first),
                            ("ε(abc)-ε(ab₂)ε(b₁c)".to_string(), &abc - &second),
                        ])
                    });
                }
            }
            c
        })
        .collect();
    let mut weak_counit = Check::new("weak_counit");
    for p in parts {
        weak_counit.absorb(p);
    }

    let mut weak_unit = Check::new("weak_unit_comultiplicativity");
    let unit = h.unit();
    let d2 = coalg.delta2(unit);
    let d1 = coalg.delta(unit);
    let one = tensor_of(&[unit]);
    let mut d1_one = Tensor::new();
    let mut one_d1 = Tensor::new();
    for (k, c) in &d1 {
        for (u, x) in &one {
            add_term(&mut d1_one, vec![k[0], k[1], u[0]], c * x);
            add_term(&mut one_d1, vec![u[0], k[0], k[1]], c * x);
        }
    }
    for (order, rhs) in [
        ("(Δ(1)⊗1)(1⊗Δ(1))", alg.tensor_mul(&d1_one, &one_d1)),
        ("(1⊗Δ(1))(Δ(1)⊗1)", alg.tensor_mul(&one_d1, &d1_one)),
    ] {
        let diff = tensor_sub(&d2, &rhs);
        weak_unit.record(diff.is_empty(), || {
            Witness::new(["1".to_string(), order.to_string()])
                .sparse_residual(tensor_residual(&diff, labels))
        });
    }
    Report {
        checks: vec![comult, weak_counit, weak_unit],
    }
}

/// Matrices of the counital maps and their images.
#[derive(Clone, Debug)]
pub struct CounitalMaps {
    /// `ε_s(x) = 1₁ ε(x 1₂)`
    pub eps_s: Matrix,
    /// `ε_t(x) = ε(1₁ x) 1₂`
    pub eps_t: Matrix,
    pub source: Subspace,
    pub target: Subspace,
}

pub fn counital_maps(h: &WeakHopfPresentation) -> CounitalMaps {
    let n = h.dim();
    let e = counit_pairing(h);
    let d1 = h.delta(h.unit());
    let mut eps_s = Matrix::zeros(n, n);
    let mut eps_t = Matrix::zeros(n, n);
    for j in 0..n {
        for (k, c) in &d1 {
            let (p, q) = (k[0], k[1]);
            let t = c * &e[(p, j)];
            if !t.is_zero() {
                eps_t[(q, j)] += t;
            }
            let s = c * &e[(j, q)];
            if !s.is_zero() {
                eps_s[(p, j)] += s;
            }
        }
    }
    let source = eps_s.image();
    let target = eps_t.image();
    CounitalMaps {
        eps_s,
        eps_t,
        source,
        target,
    }
}

/// Idempotency of both counital maps.
pub fn check_counital(h: &WeakHopfPresentation) -> Report {
    let maps = counital_maps(h);
    let mut c = Check::new("counital_idempotent");
    for (name, m) in [("ε_s", &maps.eps_s), ("ε_t", &maps.eps_t)] {
        let sq = m.dot(m);
        c.record(sq == *m, || Witness::new([name]));
    }
    Report { checks: vec![c] }
}

/// The three antipode axioms plus anti-multiplicativity and anti-comultiplicativity of `S`.
pub fn check_antipode(h: &WeakHopfPresentation) -> Result<Report, WalgError> {
    let s = h.require_antipode()?;
    let n = h.dim();
    let labels = h.labels();
    let alg = &h.algebra;
    let maps = counital_maps(h);
    let s_cols: Vec<Vec<Scalar>> = s.columns();
    let mut ax1 = Check::new("antipode_source");
    let mut ax2 = Check::new("antipode_target");
    let mut ax3 = Check::new("antipode_sandwich");
    let mut anti_mult = Check::new("antipode_antimultiplicative");
    let mut anti_comult = Check::new("antipode_anticomultiplicative");
    for i in 0..n {
        let mut left = zero_vec(n);
        let mut right = zero_vec(n);
        for ((p, q), c) in h.coalgebra.delta_basis(i) {
            axpy(&mut left, c, &alg.mul_basis_right(&s_cols[*p], *q));
            axpy(&mut right, c, &alg.mul_basis_left(*p, &s_cols[*q]));
        }
        let d = crate::exact::sub_vec(&left, &maps.eps_s.column(i));
        ax1.record(crate::exact::is_zero_vec(&d), || {
            Witness::new([labels[i].clone()]).residual(labels, &d)
        });
        let d = crate::exact::sub_vec(&right, &maps.eps_t.column(i));
        ax2.record(crate::exact::is_zero_vec(&d), || {
            Witness::new([labels[i].clone()]).residual(labels, &d)
        });

        let mut sandwich = zero_vec(n);
        for (key, c) in h.coalgebra.delta2(&unit_vec(n, i)) {
            let v = alg.mul(
                &alg.mul_basis_right(&s_cols[key[0]], key[1]),
                &s_cols[key[2]],
            );
            axpy(&mut sandwich, &c, &v);
        }
        let d = crate::exact::sub_vec(&sandwich, &s_cols[i]);
        ax3.record(crate::exact::is_zero_vec(&d), || {
            Witness::new([labels[i].clone()]).residual(labels, &d)
        });

        for j in 0..n {
            let lhs = s.apply(&alg.mul(&unit_vec(n, i), &unit_vec(n, j)));
            let rhs = alg.mul(&s_cols[j], &s_cols[i]);
            let d = crate::exact::sub_vec(&lhs, &rhs);
            anti_mult.record(crate::exact::is_zero_vec(&d), || {
                Witness::new(basis_pair_label(labels, &[i, j])).residual(labels, &d)
            });
        }

        let lhs = h.delta(&s_cols[i]);
        let mut rhs = Tensor::new();
        for ((p, q), c) in h.coalgebra.delta_basis(i) {
            for (k, x) in tensor_of(&[&s_cols[*q], &s_cols[*p]]) {
                add_term(&mut rhs, k, c * x);
            }
        }
        let d = tensor_sub(&lhs, &rhs);
        anti_comult.record(d.is_empty(), || {
            Witness::new([labels[i].clone()]).sparse_residual(tensor_residual(&d, labels))
        });
    }
    Ok(Report {
        checks: vec![ax1, ax2, ax3, anti_mult, anti_comult],
    })
}

/// Full axiom suite: algebra, coalgebra, weak bialgebra, counital idempotency and (when an
/// antipode is present) the antipode axioms.
pub fn check_weak_hopf(h: &WeakHopfPresentation) -> Report {
    let mut r = Report::new();
    r.extend_prefixed("algebra", check_algebra(&h.algebra));
    r.extend_prefixed("coalgebra", check_coalgebra(&h.coalgebra));
    r.extend_prefixed("weak_bialgebra", check_weak_bialgebra(h));
    r.extend_prefixed("counital", check_counital(h));
    match check_antipode(h) {
        Ok(a) => r.extend_prefixed("antipode", a),
        Err(_) => r.push(
            Check::new("antipode/present").with_note("no antipode supplied; weak bialgebra only"),
        ),
    }
    r
}

/// `Δ(1) = 1⊗1`. When it holds, multiplicativity of ε is cross-checked on basis pairs and a
/// mismatch is reported as an inconsistency of the presentation.
pub fn is_hopf(h: &WeakHopfPresentation) -> Result<bool, WalgError> {
    let unit = h.unit();
    let hopf = h.delta(unit) == tensor_of(&[unit, unit]);
    if hopf {
        let n = h.dim();
        let counit = h.coalgebra.counit();
        for i in 0..n {
            for j in 0..n {
                let lhs = h.eps(&h.algebra.mul(&unit_vec(n, i), &unit_vec(n, j)));
                if lhs != &counit[i] * &counit[j] {
                    return Err(WalgError::Inconsistent(format!(
                        "Δ(1)=1⊗1 but ε(b_{i} b_{j}) ≠ ε(b_{i})ε(b_{j})"
                    )));
                }
            }
        }
    }
    Ok(hopf)
}

/// `swap ∘ Δ = Δ`.
pub fn is_cocommutative(c: &FiniteDimCoalgebra) -> bool {
    (0..c.dim()).all(|i| {
        let d: BTreeMap<(usize, usize), &Scalar> =
            c.delta_basis(i).iter().map(|(k, v)| (*k, v)).collect();
        d.iter().all(|((j, k), v)| d.get(&(*k, *j)) == Some(v))
    })
}

/// Block-diagonal direct sum. Antipode present iff every summand has one.
pub fn direct_sum(parts: &[WeakHopfPresentation]) -> Result<WeakHopfPresentation, WalgError> {
    if parts.is_empty() {
        return Err(WalgError::EmptySum);
    }
    let algs: Vec<&FiniteDimAlgebra> = parts.iter().map(|p| &p.algebra).collect();
    let coalgs: Vec<&FiniteDimCoalgebra> = parts.iter().map(|p| &p.coalgebra).collect();
    let algebra = FiniteDimAlgebra::direct_sum(&algs)?;
    let coalgebra = FiniteDimCoalgebra::direct_sum(&coalgs)?;
    let antipode = if parts.iter().all(|p| p.antipode.is_some()) {
        let n = algebra.dim();
        let mut s = Matrix::zeros(n, n);
        let mut offset = 0;
        for p in parts {
            s.set_block(offset, offset, p.antipode.as_ref().expect("checked above"));
            offset += p.dim();
        }
        Some(s)
    } else {
        None
    };
    WeakHopfPresentation::new(algebra, coalgebra, antipode)
}

/// Convolution algebra on the dual basis: `(f·g)(x) = f(x₁)g(x₂)`, unit `ε`.
pub fn dual_algebra(c: &FiniteDimCoalgebra) -> FiniteDimAlgebra {
    let labels: Vec<String> = c.labels().iter().map(|l| format!("{l}*")).collect();
    let entries = c.entries().into_iter().map(|(k, i, j, x)| (i, j, k, x));
    FiniteDimAlgebra::new(labels, entries, c.counit().to_vec())
        .expect("dual of a well-shaped coalgebra")
}
