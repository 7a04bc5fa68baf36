//! Lie algebras, X-Lie algebroids, derivation algebras, Lie module algebras, conjugation of
//! derivations by groupoid actions, and degree-bounded checks of the induced enveloping actions.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{
    is_zero_vec, sub_vec, unit_vec, zero_vec, ExactError, Matrix, Scalar, Subspace,
};
use crate::module_alg::{matrix_residual, GroupoidAction, ModuleError, XDecompAlgebra};
use crate::report::{Check, Report, Witness};
use crate::walg::FiniteDimAlgebra;

/// Default word-length bound for [`bounded_envelope_consistency`].
pub const DEFAULT_DEGREE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("malformed Lie data: {0}")]
    Shape(String),
    #[error("generator `{generator}` has entries outside the block of component `{component}`")]
    CrossComponent {
        generator: String,
        component: String,
    },
    #[error("the given matrices are not closed under the commutator")]
    NotClosed,
    #[error("the given matrices are linearly dependent")]
    Dependent,
    #[error("the actions do not share objects and carrier")]
    Mismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `[b_i, b_j] = Σ_k c[i][j][k] b_k`; antisymmetry and Jacobi are checked, not assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimLieAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<(usize, Scalar)>>,
}

impl FiniteDimLieAlgebra {
    pub fn new(
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(LieError::Shape(format!("duplicate label `{l}`")));
            }
        }
        let mut dense = vec![zero_vec(n); n * n];
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(LieError::Shape(format!(
                    "bracket index ({i}, {j}, {k}) out of range for dim {n}"
                )));
            }
            dense[i * n + j][k] += c;
        }
        let table = dense
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .collect();
        Ok(FiniteDimLieAlgebra { labels, table })
    }

    pub fn zero() -> Self {
        FiniteDimLieAlgebra {
            labels: Vec::new(),
            table: Vec::new(),
        }
    }

    pub fn abelian(labels: Vec<String>) -> Result<Self, LieError> {
        Self::new(labels, std::iter::empty())
    }

    /// `gl_n` on the elementary matrices `E{i}{j}` (1-based), ordered row-major.
    pub fn gl(n: usize) -> Self {
        let labels = (0..n * n)
            .map(|k| format!("E{}{}", k / n + 1, k % n + 1))
            .collect();
        Self::from_matrices(labels, &gl_basis(n)).expect("gl_n is a matrix Lie algebra")
    }

    /// The Lie algebra spanned by linearly independent matrices closed under the commutator.
    pub fn from_matrices(labels: Vec<String>, matrices: &[Matrix]) -> Result<Self, LieError> {
        if labels.len() != matrices.len() {
            return Err(LieError::Shape("one label per matrix is required".into()));
        }
        if matrices.is_empty() {
            return Self::new(labels, std::iter::empty());
        }
        let len = matrices[0].rows() * matrices[0].cols();
        let cols: Vec<Vec<Scalar>> = matrices.iter().map(Matrix::to_flat).collect();
        if cols.iter().any(|c| c.len() != len) {
            return Err(LieError::Shape("matrices of different shapes".into()));
        }
        let span = Matrix::from_columns(len, &cols)?;
        if span.rank() != matrices.len() {
            return Err(LieError::Dependent);
        }
        let mut entries = Vec::new();
        for (i, a) in matrices.iter().enumerate() {
            for (j, b) in matrices.iter().enumerate() {
                let c = a.commutator(b)?;
                let coords = span.solve(&c.to_flat())?.ok_or(LieError::NotClosed)?;
                entries.extend(coords.into_iter().enumerate().map(|(k, x)| (i, j, k, x)));
            }
        }
        Self::new(labels, entries)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        for (k, c) in &self.table[i * self.dim() + j] {
            out[*k] += c;
        }
        out
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                for (k, c) in &self.table[i * n + j] {
                    out[*k] += x * y * c;
                }
            }
        }
        out
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for (ij, row) in self.table.iter().enumerate() {
            for (k, c) in row {
                out.push((ij / n, ij % n, *k, c.clone()));
            }
        }
        out
    }
}

/// Elementary matrices `E_ij`, row-major.
pub fn gl_basis(n: usize) -> Vec<Matrix> {
    (0..n * n)
        .map(|k| {
            let mut m = Matrix::zeros(n, n);
            m[(k / n, k % n)] = Scalar::from_integer(1.into());
            m
        })
        .collect()
}

/// Coordinates of `M E M⁻¹` in the elementary basis, as the matrix of `E -> M E M⁻¹` on `gl_n`.
pub fn gl_conjugation(m: &Matrix) -> Result<Matrix, LieError> {
    let inv = m.inverse()?;
    let cols: Vec<Vec<Scalar>> = gl_basis(m.rows())
        .iter()
        .map(|e| m.dot(e).dot(&inv).to_flat())
        .collect();
    Ok(Matrix::from_columns(m.rows() * m.rows(), &cols)?)
}

/// Antisymmetry `[b_i, b_j] = -[b_j, b_i]`, `[b_i, b_i] = 0`, and the Jacobi identity.
pub fn check_lie(l: &FiniteDimLieAlgebra) -> Report {
    let n = l.dim();
    let labels = l.labels();
    let mut anti = Check::new("antisymmetry");
    for i in 0..n {
        for j in i..n {
            let s = crate::exact::add_vec(&l.bracket_basis(i, j), &l.bracket_basis(j, i));
            let r = if i == j { l.bracket_basis(i, i) } else { s };
            anti.record(is_zero_vec(&r), || {
                Witness::new([labels[i].clone(), labels[j].clone()]).residual(labels, &r)
            });
        }
    }
    let partial: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("jacobi");
            for j in 0..n {
                for k in 0..n {
                    let (bi, bj, bk) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
                    let t1 = l.bracket(&bi, &l.bracket(&bj, &bk));
                    let t2 = l.bracket(&bj, &l.bracket(&bk, &bi));
                    let t3 = l.bracket(&bk, &l.bracket(&bi, &bj));
                    let s = crate::exact::add_vec(&crate::exact::add_vec(&t1, &t2), &t3);
                    c.record(is_zero_vec(&s), || {
                        Witness::new([labels[i].clone(), labels[j].clone(), labels[k].clone()])
                            .residual(labels, &s)
                    });
                }
            }
            c
        })
        .collect();
    let mut jacobi = Check::new("jacobi");
    for c in partial {
        jacobi.absorb(c);
    }
    Report {
        checks: vec![anti, jacobi],
    }
}

/// `⊕_x g_x` with brackets only inside a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XLieAlgebroid {
    objects: Vec<String>,
    components: Vec<FiniteDimLieAlgebra>,
}

impl XLieAlgebroid {
    pub fn new(
        objects: Vec<String>,
        components: Vec<FiniteDimLieAlgebra>,
    ) -> Result<Self, LieError> {
        if objects.len() != components.len() {
            return Err(LieError::Shape(
                "one Lie algebra per object is required".into(),
            ));
        }
        Ok(XLieAlgebroid {
            objects,
            components,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn components(&self) -> &[FiniteDimLieAlgebra] {
        &self.components
    }

    pub fn component(&self, x: usize) -> &FiniteDimLieAlgebra {
        &self.components[x]
    }
}

pub fn check_algebroid(l: &XLieAlgebroid) -> Report {
    let mut r = Report::new();
    for (x, c) in l.objects.iter().zip(&l.components) {
        r.extend_prefixed(x, check_lie(c));
    }
    r
}

/// Componentwise representation `τ_x: g_x -> gl(A_x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAction {
    algebroid: XLieAlgebroid,
    carrier: XDecompAlgebra,
    matrices: Vec<Vec<Matrix>>,
}

impl LieAction {
    /// `matrices[x][p]` acts on `A_x` in local coordinates.
    pub fn new(
        algebroid: XLieAlgebroid,
        carrier: XDecompAlgebra,
        matrices: Vec<Vec<Matrix>>,
    ) -> Result<Self, LieError> {
        if algebroid.objects() != carrier.objects() || matrices.len() != carrier.objects().len() {
            return Err(LieError::Mismatch);
        }
        for (x, ms) in matrices.iter().enumerate() {
            let lie = algebroid.component(x);
            if ms.len() != lie.dim() {
                return Err(LieError::Shape(format!(
                    "component `{}` has {} generators but {} matrices",
                    carrier.objects()[x],
                    lie.dim(),
                    ms.len()
                )));
            }
            let d = carrier.component(x).dim();
            if let Some(m) = ms.iter().find(|m| m.rows() != d || m.cols() != d) {
                return Err(LieError::Shape(format!(
                    "matrix is {}x{}, expected {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(LieAction {
            algebroid,
            carrier,
            matrices,
        })
    }

    /// Builds from matrices on the whole carrier, rejecting any generator of `g_x` whose matrix
    /// reaches outside the `A_x` block, since brackets across components are undefined.
    pub fn from_total(
        algebroid: XLieAlgebroid,
        carrier: XDecompAlgebra,
        matrices: Vec<Vec<Matrix>>,
    ) -> Result<Self, LieError> {
        let total = carrier.dim();
        let mut local = Vec::new();
        for (x, ms) in matrices.iter().enumerate() {
            let (o, d) = (carrier.offset(x), carrier.component(x).dim());
            let mut out = Vec::new();
            for (p, m) in ms.iter().enumerate() {
                if m.rows() != total || m.cols() != total {
                    return Err(LieError::Shape(format!(
                        "matrix is {}x{}, expected {total}x{total}",
                        m.rows(),
                        m.cols()
                    )));
                }
                let block = m.block(o, o, d, d);
                let mut rest = m.clone();
                rest.set_block(o, o, &Matrix::zeros(d, d));
                if !rest.is_zero() {
                    let generator = algebroid
                        .components
                        .get(x)
                        .and_then(|l| l.labels().get(p))
                        .cloned()
                        .unwrap_or_else(|| format!("#{p}"));
                    return Err(LieError::CrossComponent {
                        generator,
                        component: carrier.objects()[x].clone(),
                    });
                }
                out.push(block);
            }
            local.push(out);
        }
        Self::new(algebroid, carrier, local)
    }

    pub fn algebroid(&self) -> &XLieAlgebroid {
        &self.algebroid
    }

    pub fn carrier(&self) -> &XDecompAlgebra {
        &self.carrier
    }

    pub fn matrices(&self, x: usize) -> &[Matrix] {
        &self.matrices[x]
    }

    /// `τ_x(p)` for an arbitrary element of `g_x`.
    pub fn tau(&self, x: usize, p: &[Scalar]) -> Matrix {
        let d = self.carrier.component(x).dim();
        let mut out = Matrix::zeros(d, d);
        for (c, m) in p.iter().zip(&self.matrices[x]) {
            if !c.is_zero() {
                out = out.add(&m.scale(c)).expect("square");
            }
        }
        out
    }
}

fn leibniz_system(a: &FiniteDimAlgebra) -> Matrix {
    let n = a.dim();
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            // D(b_i b_j) - b_i D(b_j) - D(b_i) b_j, coordinate r, as a form in the entries D[s][k].
            let mut block = vec![zero_vec(n * n); n];
            for (k, c) in a.product(i, j) {
                for (r, row) in block.iter_mut().enumerate() {
                    row[r * n + k] += c;
                }
            }
            for s in 0..n {
                for (r, c) in a.product(i, s) {
                    block[*r][s * n + j] -= c;
                }
                for (r, c) in a.product(s, j) {
                    block[*r][s * n + i] -= c;
                }
            }
            rows.extend(block);
        }
    }
    Matrix::from_rows_with_cols(rows, n * n).expect("uniform rows")
}

/// `Der(A)` as a subspace of `gl(A)`, flattened row-major (`D[r][c]` at `r·n + c`).
pub fn derivation_space(a: &FiniteDimAlgebra) -> Subspace {
    if a.dim() == 0 {
        return Subspace::zero(0);
    }
    leibniz_system(a).kernel()
}

/// Basis of a flattened subspace of `gl_n` as matrices.
pub fn as_matrices(space: &Subspace, n: usize) -> Vec<Matrix> {
    space
        .basis()
        .into_iter()
        .map(|v| Matrix::from_flat(n, n, v).expect("n² entries"))
        .collect()
}

/// `[D, D'] ∈ Der(A)` for all pairs of basis derivations.
pub fn check_bracket_closure(a: &FiniteDimAlgebra, space: &Subspace) -> Report {
    let ms = as_matrices(space, a.dim());
    let mut c = Check::new("bracket_closure");
    for (i, x) in ms.iter().enumerate() {
        for (j, y) in ms.iter().enumerate().skip(i + 1) {
            let br = x.commutator(y).expect("square");
            let ok = space.contains(&br.to_flat()).expect("same ambient");
            c.record(ok, || Witness::new([format!("D{i}"), format!("D{j}")]));
        }
    }
    Report { checks: vec![c] }
}

/// The tautological action of `Der_X(A) = ⊕_x Der(A_x)` on `A`. Generators of `Der(A_x)` are
/// labelled `{x}:D{k}`.
pub fn der_x(a: &XDecompAlgebra) -> Result<LieAction, LieError> {
    let mut comps = Vec::new();
    let mut mats = Vec::new();
    for (x, comp) in a.components().iter().enumerate() {
        let ms = as_matrices(&derivation_space(comp), comp.dim());
        let labels = (0..ms.len())
            .map(|k| format!("{}:D{k}", a.objects()[x]))
            .collect();
        comps.push(FiniteDimLieAlgebra::from_matrices(labels, &ms)?);
        mats.push(ms);
    }
    LieAction::new(
        XLieAlgebroid::new(a.objects().to_vec(), comps)?,
        a.clone(),
        mats,
    )
}

/// Leibniz rule and `p·1 = 0` for every generator, and `τ([p, q]) = [τ(p), τ(q)]`.
pub fn check_lie_module_algebra(
    l: &FiniteDimLieAlgebra,
    a: &FiniteDimAlgebra,
    tau: &[Matrix],
) -> Result<Report, LieError> {
    let n = a.dim();
    if tau.len() != l.dim() || tau.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(LieError::Shape(
            "one square matrix of the carrier size per generator is required".into(),
        ));
    }
    let al = a.labels();
    let ll = l.labels();
    let mut leibniz = Check::new("leibniz");
    for (p, t) in tau.iter().enumerate() {
        let images: Vec<Vec<Scalar>> = (0..n).map(|i| t.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = t.apply(&a.product_vec(i, j));
                let rhs = crate::exact::add_vec(
                    &a.mul(&unit_vec(n, i), &images[j]),
                    &a.mul(&images[i], &unit_vec(n, j)),
                );
                let d = sub_vec(&lhs, &rhs);
                leibniz.record(is_zero_vec(&d), || {
                    Witness::new([ll[p].clone(), al[i].clone(), al[j].clone()]).residual(al, &d)
                });
            }
        }
    }
    let mut unit = Check::new("unit");
    for (p, t) in tau.iter().enumerate() {
        let image = t.apply(a.unit());
        unit.record(is_zero_vec(&image), || {
            Witness::new([ll[p].clone()]).residual(al, &image)
        });
    }
    let mut hom = Check::new("lie_homomorphism");
    for p in 0..l.dim() {
        for q in 0..l.dim() {
            let lhs = tau[p].commutator(&tau[q])?;
            let mut rhs = Matrix::zeros(n, n);
            for (k, c) in l.bracket_basis(p, q).iter().enumerate() {
                if !c.is_zero() {
                    rhs = rhs.add(&tau[k].scale(c))?;
                }
            }
            let diff = lhs.sub(&rhs)?;
            hom.record(diff.is_zero(), || {
                Witness::new([ll[p].clone(), ll[q].clone()])
                    .sparse_residual(matrix_residual(&diff, al, al))
            });
        }
    }
    Ok(Report {
        checks: vec![leibniz, unit, hom],
    })
}

/// Componentwise [`check_lie_module_algebra`], prefixed by object.
pub fn check_algebroid_action(act: &LieAction) -> Result<Report, LieError> {
    let mut r = Report::new();
    for (x, name) in act.carrier.objects().iter().enumerate() {
        r.extend_prefixed(
            name,
            check_lie_module_algebra(
                act.algebroid.component(x),
                act.carrier.component(x),
                &act.matrices[x],
            )?,
        );
    }
    Ok(r)
}

/// Output of [`conjugate_action`]: the conjugated matrices per `(g, p)` and their certificates.
#[derive(Clone, Debug)]
pub struct Conjugation {
    /// `(morphism, generator of g_{s(g)}, ν_g τ(p) ν_{g⁻¹})`
    pub table: Vec<(String, String, Matrix)>,
    pub report: Report,
}

/// Conjugates every generator `p ∈ g_{s(g)}` by `ν_g` and certifies the result is a derivation
/// of `A_{t(g)}`. When `lie_maps` gives the action of each morphism on the algebroid
/// (`g_{s(g)} -> g_{t(g)}` in generator coordinates), also certifies `τ(g·p) = ν_g τ(p) ν_{g⁻¹}`.
pub fn conjugate_action(
    grp: &GroupoidAction,
    lie: &LieAction,
    lie_maps: Option<&[Matrix]>,
) -> Result<Conjugation, LieError> {
    let carrier = grp
        .carrier()
        .as_algebra()
        .ok_or(ModuleError::NotAlgebraCarrier)?;
    if carrier != &lie.carrier {
        return Err(LieError::Mismatch);
    }
    let g = grp.groupoid();
    if let Some(maps) = lie_maps {
        if maps.len() != g.num_morphisms() {
            return Err(LieError::Shape(
                "one Lie map per morphism is required".into(),
            ));
        }
    }
    let mut table = Vec::new();
    let mut membership = Check::new("derivation_membership");
    let mut equivariance = Check::new("equivariance");
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let target = carrier.component(t);
        let der_t = derivation_space(target);
        let nu = grp.map(m);
        let nu_inv = grp.map(g.inverse(m));
        for (p, label) in lie.algebroid.component(s).labels().iter().enumerate() {
            let conj = nu.dot(&lie.matrices[s][p]).dot(nu_inv);
            let ok = target.dim() == 0 || der_t.contains(&conj.to_flat())?;
            membership.record(ok, || Witness::new([g.label(m).to_string(), label.clone()]));
            if let Some(maps) = lie_maps {
                let gp = maps[m].column(p);
                let diff = lie.tau(t, &gp).sub(&conj)?;
                equivariance.record(diff.is_zero(), || {
                    Witness::new([g.label(m).to_string(), label.clone()])
                        .sparse_residual(matrix_residual(&diff, target.labels(), target.labels()))
                });
            }
            table.push((g.label(m).to_string(), label.clone(), conj));
        }
    }
    let mut checks = vec![membership];
    if lie_maps.is_some() {
        checks.push(equivariance);
    }
    Ok(Conjugation {
        table,
        report: Report { checks },
    })
}

/// A word `p_1 ... p_k # g` with generators of `g_{t(g)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Word {
    morphism: usize,
    letters: Vec<usize>,
}

fn words_of_length(generators: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..generators).map(move |p| {
                    let mut w = w.clone();
                    w.push(p);
                    w
                })
            })
            .collect();
    }
    out
}

/// For every word `w = p_1 ... p_k # g` with `k ≤ degree`, checks `w·(ab) = Σ (w₁·a)(w₂·b)` on
/// basis pairs of `A_{s(g)}`, where `Δ` splits the letters into complementary ordered
/// subsequences and duplicates `g`; and `w·1 = 0` for `k ≥ 1`, `g·1_{s(g)} = 1_{t(g)}` for `k = 0`.
/// Checks are named by word length so that bounds can be compared.
pub fn bounded_envelope_consistency(
    lie: &LieAction,
    grp: &GroupoidAction,
    degree: usize,
) -> Result<Report, LieError> {
    let carrier = grp
        .carrier()
        .as_algebra()
        .ok_or(ModuleError::NotAlgebraCarrier)?;
    if carrier != &lie.carrier {
        return Err(LieError::Mismatch);
    }
    let g = grp.groupoid();
    let mut report = Report::new();
    for k in 0..=degree {
        let mut words = Vec::new();
        for m in 0..g.num_morphisms() {
            let t = g.target(m);
            for letters in words_of_length(lie.algebroid.component(t).dim(), k) {
                words.push(Word {
                    morphism: m,
                    letters,
                });
            }
        }
        let partial: Vec<(Check, Check)> = words
            .par_iter()
            .map(|w| {
                let mut mult = Check::new(&format!("multiplicativity/k{k}"));
                let mut unital = Check::new(&format!("unitality/k{k}"));
                let (s, t) = (g.source(w.morphism), g.target(w.morphism));
                let (src, tgt) = (carrier.component(s), carrier.component(t));
                let gens = &lie.matrices[t];
                // Word matrices `p_1 ... p_j ν_g`, memoized by letter sequence.
                let mut memo: BTreeMap<Vec<usize>, Matrix> = BTreeMap::new();
                let mut word_matrix = |letters: &[usize]| -> Matrix {
                    memo.entry(letters.to_vec())
                        .or_insert_with(|| {
                            let mut out = grp.map(w.morphism).clone();
                            for &p in letters.iter().rev() {
                                out = gens[p].dot(&out);
                            }
                            out
                        })
                        .clone()
                };
                let name = word_label(lie, g, w);
                // Complementary ordered subsequences, merged with multiplicity.
                let mut splits: BTreeMap<(Vec<usize>, Vec<usize>), i64> = BTreeMap::new();
                for mask in 0u64..(1 << k) {
                    let mut left = Vec::new();
                    let mut right = Vec::new();
                    for (i, &p) in w.letters.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            left.push(p);
                        } else {
                            right.push(p);
                        }
                    }
                    *splits.entry((left, right)).or_insert(0) += 1;
                }
                let full = word_matrix(&w.letters);
                let factors: Vec<(Scalar, Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> = splits
                    .iter()
                    .map(|((l, r), c)| {
                        (Scalar::from_integer((*c).into()), word_matrix(l).columns(), word_matrix(r).columns())
                    })
                    .collect();
                for i in 0..src.dim() {
                    for j in 0..src.dim() {
                        let lhs = full.apply(&src.product_vec(i, j));
                        let mut rhs = zero_vec(tgt.dim());
                        for (c, left, right) in &factors {
                            let prod = tgt.mul(&left[i], &right[j]);
                            crate::exact::axpy(&mut rhs, c, &prod);
                        }
                        let d = sub_vec(&lhs, &rhs);
                        mult.record(is_zero_vec(&d), || {
                            Witness::new([
                                name.clone(),
                                src.labels()[i].clone(),
                                src.labels()[j].clone(),
                            ])
                            .residual(tgt.labels(), &d)
                        });
                    }
                }
                let image = full.apply(src.unit());
                let expected = if k == 0 {
                    tgt.unit().to_vec()
                } else {
                    zero_vec(tgt.dim())
                };
                let d = sub_vec(&image, &expected);
                unital.record(is_zero_vec(&d), || {
                    Witness::new([name.clone()]).residual(tgt.labels(), &d)
                });
                (mult, unital)
            })
            .collect();
        let mut mult = Check::new(&format!("multiplicativity/k{k}"));
        let mut unital = Check::new(&format!("unitality/k{k}"));
        for (m, u) in partial {
            mult.absorb(m);
            unital.absorb(u);
        }
        report.push(mult);
        report.push(unital);
    }
    Ok(report)
}

fn word_label(lie: &LieAction, g: &crate::groupoid::FiniteGroupoid, w: &Word) -> String {
    let gens = lie.algebroid.component(g.target(w.morphism)).labels();
    let letters: Vec<&str> = w.letters.iter().map(|&p| gens[p].as_str()).collect();
    if letters.is_empty() {
        g.label(w.morphism).to_string()
    } else {
        format!("{} # {}", letters.join(" "), g.label(w.morphism))
    }
}
