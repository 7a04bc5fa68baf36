//! Groupoid modules and module algebras, module algebras over weak Hopf algebras, the passage
//! between actions, functors and `kG`-modules, Hopf ideals and inner faithfulness.

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{
    is_zero_vec, scale_vec, sub_vec, unit_vec, zero_vec, ExactError, Matrix, Scalar, Subspace,
};
use crate::groupoid::{groupoid_algebra, FiniteGroupoid, GroupoidError};
use crate::report::{combination, Check, Report, Witness};
use crate::split::split_commutative;
use crate::walg::{
    counital_maps, dual_algebra, tensor_of, tensor_residual, tensor_sub, FiniteDimAlgebra, Tensor,
    WalgError, WeakHopfPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the actions are over different groupoids")]
    GroupoidMismatch,
    #[error("the carrier is a plain vector space, not an algebra")]
    NotAlgebraCarrier,
    #[error("morphism `{morphism}` is not an algebra automorphism: {condition}")]
    Certification { morphism: String, condition: String },
    #[error("H_s and H_t differ, so the idempotent decomposition does not apply")]
    SourceTargetDiffer,
    #[error("invalid idempotent family: {0}")]
    InvalidIdempotents(String),
    #[error("computed Hopf ideal failed certification: {0}")]
    Uncertified(String),
    #[error(transparent)]
    Walg(#[from] WalgError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Nonzero entries of a matrix difference, labelled `row|column`.
pub fn matrix_residual(diff: &Matrix, rows: &[String], cols: &[String]) -> Vec<(String, Scalar)> {
    let mut out = Vec::new();
    for i in 0..diff.rows() {
        for j in 0..diff.cols() {
            if !diff[(i, j)].is_zero() {
                out.push((format!("{}|{}", rows[i], cols[j]), diff[(i, j)].clone()));
            }
        }
    }
    out
}

/// Scales `v` so that its last nonzero coordinate is 1, giving a canonical display form.
pub fn normalize_trailing(v: &[Scalar]) -> Vec<Scalar> {
    match v.iter().rev().find(|c| !c.is_zero()) {
        Some(c) => scale_vec(&c.recip(), v),
        None => v.to_vec(),
    }
}

/// A direct sum `A = ⊕_x A_x` of unital algebras indexed by objects; components may be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XDecompAlgebra {
    objects: Vec<String>,
    components: Vec<FiniteDimAlgebra>,
    offsets: Vec<usize>,
    total: FiniteDimAlgebra,
}

impl XDecompAlgebra {
    pub fn new(
        objects: Vec<String>,
        components: Vec<FiniteDimAlgebra>,
    ) -> Result<Self, ModuleError> {
        if objects.len() != components.len() {
            return Err(ModuleError::Shape(format!(
                "{} objects but {} components",
                objects.len(),
                components.len()
            )));
        }
        let refs: Vec<&FiniteDimAlgebra> = components.iter().collect();
        let total = FiniteDimAlgebra::direct_sum(&refs)?;
        let mut offsets = Vec::with_capacity(components.len());
        let mut acc = 0;
        for c in &components {
            offsets.push(acc);
            acc += c.dim();
        }
        Ok(XDecompAlgebra {
            objects,
            components,
            offsets,
            total,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn components(&self) -> &[FiniteDimAlgebra] {
        &self.components
    }

    pub fn component(&self, x: usize) -> &FiniteDimAlgebra {
        &self.components[x]
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    pub fn total(&self) -> &FiniteDimAlgebra {
        &self.total
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(FiniteDimAlgebra::dim).collect()
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    /// Local vector of `A_x` placed into `A`.
    pub fn embed(&self, x: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        out[self.offsets[x]..self.offsets[x] + v.len()].clone_from_slice(v);
        out
    }

    /// The `A_x` block of a vector of `A`.
    pub fn project(&self, x: usize, v: &[Scalar]) -> Vec<Scalar> {
        v[self.offsets[x]..self.offsets[x] + self.components[x].dim()].to_vec()
    }

    /// `1_x`, embedded in `A`.
    pub fn local_identity(&self, x: usize) -> Vec<Scalar> {
        self.embed(x, self.components[x].unit())
    }

    pub fn local_identities(&self) -> Vec<(String, Vec<Scalar>)> {
        (0..self.objects.len())
            .map(|x| (self.objects[x].clone(), self.local_identity(x)))
            .collect()
    }
}

/// The local identities are central, idempotent, pairwise orthogonal and sum to `1_A`.
pub fn check_local_identities(a: &FiniteDimAlgebra, idems: &[(String, Vec<Scalar>)]) -> Report {
    let n = a.dim();
    let labels = a.labels();
    let mut idem = Check::new("idempotent");
    let mut central = Check::new("central");
    let mut orth = Check::new("orthogonal");
    let mut complete = Check::new("complete");
    let mut sum = zero_vec(n);
    for (x, e) in idems {
        let sq = a.mul(e, e);
        idem.record(sq == *e, || {
            Witness::new([x.clone()]).residual(labels, &sub_vec(&sq, e))
        });
        for i in 0..n {
            let d = sub_vec(&a.mul_basis_left(i, e), &a.mul_basis_right(e, i));
            central.record(is_zero_vec(&d), || {
                Witness::new([x.clone(), labels[i].clone()]).residual(labels, &d)
            });
        }
        sum = crate::exact::add_vec(&sum, e);
    }
    for (i, (x, e)) in idems.iter().enumerate() {
        for (y, f) in &idems[i + 1..] {
            let p = a.mul(e, f);
            orth.record(is_zero_vec(&p), || {
                Witness::new([x.clone(), y.clone()]).residual(labels, &p)
            });
        }
    }
    let d = sub_vec(&sum, a.unit());
    complete.record(is_zero_vec(&d), || {
        Witness::new(["sum"]).residual(labels, &d)
    });
    Report {
        checks: vec![idem, central, orth, complete],
    }
}

/// Graded carrier `V = ⊕_x V_x`, optionally an X-decomposable algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    objects: Vec<String>,
    dims: Vec<usize>,
    labels: Vec<String>,
    algebra: Option<XDecompAlgebra>,
}

impl Carrier {
    pub fn space(
        objects: Vec<String>,
        dims: Vec<usize>,
        labels: Vec<String>,
    ) -> Result<Self, ModuleError> {
        if objects.len() != dims.len() {
            return Err(ModuleError::Shape(
                "one dimension per object is required".into(),
            ));
        }
        if labels.len() != dims.iter().sum::<usize>() {
            return Err(ModuleError::Shape(
                "one label per carrier basis vector is required".into(),
            ));
        }
        Ok(Carrier {
            objects,
            dims,
            labels,
            algebra: None,
        })
    }

    /// A space carrier with labels `{object}.{i}`.
    pub fn space_auto(objects: Vec<String>, dims: Vec<usize>) -> Result<Self, ModuleError> {
        let labels = objects
            .iter()
            .zip(&dims)
            .flat_map(|(x, &d)| (0..d).map(move |i| format!("{x}.{i}")))
            .collect();
        Self::space(objects, dims, labels)
    }

    pub fn algebra(a: XDecompAlgebra) -> Self {
        Carrier {
            objects: a.objects().to_vec(),
            dims: a.dims(),
            labels: a.total().labels().to_vec(),
            algebra: Some(a),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn offset(&self, x: usize) -> usize {
        self.dims[..x].iter().sum()
    }

    /// Labels of the `V_x` block.
    pub fn block_labels(&self, x: usize) -> &[String] {
        let o = self.offset(x);
        &self.labels[o..o + self.dims[x]]
    }

    pub fn as_algebra(&self) -> Option<&XDecompAlgebra> {
        self.algebra.as_ref()
    }
}

/// A groupoid acting on a graded carrier through structure maps `ν_g: V_{s(g)} -> V_{t(g)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidAction {
    groupoid: FiniteGroupoid,
    carrier: Carrier,
    maps: Vec<Matrix>,
}

impl GroupoidAction {
    /// `maps` is indexed like the morphisms of the groupoid.
    pub fn new(
        groupoid: FiniteGroupoid,
        carrier: Carrier,
        maps: Vec<Matrix>,
    ) -> Result<Self, ModuleError> {
        if carrier.objects() != groupoid.objects() {
            return Err(ModuleError::Shape(
                "carrier components must match the groupoid objects in order".into(),
            ));
        }
        if maps.len() != groupoid.num_morphisms() {
            return Err(ModuleError::Shape(format!(
                "{} structure maps for {} morphisms",
                maps.len(),
                groupoid.num_morphisms()
            )));
        }
        for (g, m) in maps.iter().enumerate() {
            let (s, t) = (groupoid.source(g), groupoid.target(g));
            if m.rows() != carrier.dims[t] || m.cols() != carrier.dims[s] {
                return Err(ModuleError::Shape(format!(
                    "structure map of `{}` is {}x{}, expected {}x{}",
                    groupoid.label(g),
                    m.rows(),
                    m.cols(),
                    carrier.dims[t],
                    carrier.dims[s]
                )));
            }
        }
        Ok(GroupoidAction {
            groupoid,
            carrier,
            maps,
        })
    }

    /// Structure maps given by morphism label; every morphism must be covered exactly once.
    pub fn from_labelled(
        groupoid: FiniteGroupoid,
        carrier: Carrier,
        maps: Vec<(String, Matrix)>,
    ) -> Result<Self, ModuleError> {
        let mut slots: Vec<Option<Matrix>> = vec![None; groupoid.num_morphisms()];
        for (label, m) in maps {
            let g = groupoid
                .morphism_index(&label)
                .ok_or_else(|| ModuleError::Shape(format!("unknown morphism `{label}`")))?;
            if slots[g].replace(m).is_some() {
                return Err(ModuleError::Shape(format!(
                    "morphism `{label}` given twice"
                )));
            }
        }
        let maps = slots
            .into_iter()
            .enumerate()
            .map(|(g, m)| {
                m.ok_or_else(|| {
                    ModuleError::Shape(format!("no structure map for `{}`", groupoid.label(g)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(groupoid, carrier, maps)
    }

    /// Every morphism acts by the identity; requires all components of a connected piece to
    /// have equal dimension.
    pub fn identity(groupoid: FiniteGroupoid, carrier: Carrier) -> Result<Self, ModuleError> {
        let maps = (0..groupoid.num_morphisms())
            .map(|g| {
                let (s, t) = (groupoid.source(g), groupoid.target(g));
                if carrier.dims[s] != carrier.dims[t] {
                    return Err(ModuleError::Shape(
                        "identity action needs equal component dimensions".into(),
                    ));
                }
                Ok(Matrix::identity(carrier.dims[s]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(groupoid, carrier, maps)
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, g: usize) -> &Matrix {
        &self.maps[g]
    }

    fn algebra(&self) -> Result<&XDecompAlgebra, ModuleError> {
        self.carrier
            .as_algebra()
            .ok_or(ModuleError::NotAlgebraCarrier)
    }
}

/// `ν_{gh} = ν_g ν_h`, `ν_{e_x} = id` and `ν_{g⁻¹} ν_g = id`, `ν_g ν_{g⁻¹} = id`.
pub fn check_groupoid_module(act: &GroupoidAction) -> Report {
    let g = &act.groupoid;
    let c = &act.carrier;
    let mut comp = Check::new("composition");
    for (&(a, b), &ab) in g.compositions() {
        let prod = act.maps[a].dot(&act.maps[b]);
        let diff = act.maps[ab].sub(&prod).expect("shapes validated");
        comp.record(diff.is_zero(), || {
            let (s, t) = (g.source(b), g.target(a));
            Witness::new([g.label(a), g.label(b)]).sparse_residual(matrix_residual(
                &diff,
                c.block_labels(t),
                c.block_labels(s),
            ))
        });
    }
    let mut ident = Check::new("identity");
    for x in 0..g.objects().len() {
        let e = g.identity(x);
        let diff = act.maps[e]
            .sub(&Matrix::identity(c.dims[x]))
            .expect("square");
        ident.record(diff.is_zero(), || {
            Witness::new([g.label(e)]).sparse_residual(matrix_residual(
                &diff,
                c.block_labels(x),
                c.block_labels(x),
            ))
        });
    }
    let mut inv = Check::new("invertibility");
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let back = &act.maps[g.inverse(m)];
        let ok = back.cols() == c.dims[t]
            && back.rows() == c.dims[s]
            && back.dot(&act.maps[m]) == Matrix::identity(c.dims[s])
            && act.maps[m].dot(back) == Matrix::identity(c.dims[t]);
        inv.record(ok, || Witness::new([g.label(m)]));
    }
    Report {
        checks: vec![comp, ident, inv],
    }
}

/// `ν_g(ab) = ν_g(a) ν_g(b)` on basis pairs of `A_{s(g)}` and `ν_g(1_{s(g)}) = 1_{t(g)}`.
pub fn check_groupoid_module_algebra(act: &GroupoidAction) -> Result<Report, ModuleError> {
    let alg = act.algebra()?;
    let g = &act.groupoid;
    let mut mult = Check::new("multiplicativity");
    let mut unital = Check::new("unitality");
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let (src, tgt) = (alg.component(s), alg.component(t));
        let nu = &act.maps[m];
        let images: Vec<Vec<Scalar>> = (0..src.dim()).map(|i| nu.column(i)).collect();
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let lhs = nu.apply(&src.product_vec(i, j));
                let rhs = tgt.mul(&images[i], &images[j]);
                let d = sub_vec(&lhs, &rhs);
                mult.record(is_zero_vec(&d), || {
                    Witness::new([
                        g.label(m).to_string(),
                        src.labels()[i].clone(),
                        src.labels()[j].clone(),
                    ])
                    .residual(tgt.labels(), &d)
                });
            }
        }
        let image = nu.apply(src.unit());
        unital.record(image.as_slice() == tgt.unit(), || {
            Witness::new([g.label(m)])
                .residual(tgt.labels(), &sub_vec(&image, tgt.unit()))
                .value("input", src.unit().to_vec())
                .value("image", image.clone())
        });
    }
    Ok(Report {
        checks: vec![mult, unital],
    })
}

/// Certifies `m: A -> B` as an invertible unital algebra map, naming the first violated condition.
pub fn certify_algebra_iso(
    m: &Matrix,
    a: &FiniteDimAlgebra,
    b: &FiniteDimAlgebra,
) -> Result<(), String> {
    if m.rows() != b.dim() || m.cols() != a.dim() {
        return Err("shape".into());
    }
    if !m.is_invertible() {
        return Err("invertibility".into());
    }
    if m.apply(a.unit()) != b.unit() {
        return Err("unitality".into());
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if m.apply(&a.product_vec(i, j)) != b.mul(&m.column(i), &m.column(j)) {
                return Err(format!(
                    "multiplicativity on ({}, {})",
                    a.labels()[i],
                    a.labels()[j]
                ));
            }
        }
    }
    Ok(())
}

/// A functor `π: G -> Aut_{X-Alg}(A)` with `π(x) = A_x`; morphism images are certified members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismFunctor {
    pub groupoid: FiniteGroupoid,
    pub algebra: XDecompAlgebra,
    pub images: Vec<Matrix>,
}

fn certify_functor(
    g: &FiniteGroupoid,
    alg: &XDecompAlgebra,
    images: &[Matrix],
) -> Result<(), ModuleError> {
    for m in 0..g.num_morphisms() {
        certify_algebra_iso(
            &images[m],
            alg.component(g.source(m)),
            alg.component(g.target(m)),
        )
        .map_err(|condition| ModuleError::Certification {
            morphism: g.label(m).to_string(),
            condition,
        })?;
    }
    for (&(a, b), &ab) in g.compositions() {
        if images[ab] != images[a].dot(&images[b]) {
            return Err(ModuleError::Certification {
                morphism: g.label(ab).to_string(),
                condition: format!("functoriality on ({}, {})", g.label(a), g.label(b)),
            });
        }
    }
    for x in 0..g.objects().len() {
        if images[g.identity(x)] != Matrix::identity(alg.component(x).dim()) {
            return Err(ModuleError::Certification {
                morphism: g.label(g.identity(x)).to_string(),
                condition: "identity preservation".into(),
            });
        }
    }
    Ok(())
}

pub fn action_to_functor(act: &GroupoidAction) -> Result<AutomorphismFunctor, ModuleError> {
    let alg = act.algebra()?;
    certify_functor(&act.groupoid, alg, &act.maps)?;
    Ok(AutomorphismFunctor {
        groupoid: act.groupoid.clone(),
        algebra: alg.clone(),
        images: act.maps.clone(),
    })
}

pub fn functor_to_action(f: &AutomorphismFunctor) -> Result<GroupoidAction, ModuleError> {
    certify_functor(&f.groupoid, &f.algebra, &f.images)?;
    GroupoidAction::new(
        f.groupoid.clone(),
        Carrier::algebra(f.algebra.clone()),
        f.images.clone(),
    )
}

/// Left `H`-module structure on a carrier, one matrix per basis element of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HModuleAction {
    hopf: WeakHopfPresentation,
    labels: Vec<String>,
    matrices: Vec<Matrix>,
}

impl HModuleAction {
    pub fn new(
        hopf: WeakHopfPresentation,
        labels: Vec<String>,
        matrices: Vec<Matrix>,
    ) -> Result<Self, ModuleError> {
        if matrices.len() != hopf.dim() {
            return Err(ModuleError::Shape(format!(
                "{} matrices for dim H = {}",
                matrices.len(),
                hopf.dim()
            )));
        }
        let d = labels.len();
        if let Some(m) = matrices.iter().find(|m| m.rows() != d || m.cols() != d) {
            return Err(ModuleError::Shape(format!(
                "action matrix is {}x{}, expected {d}x{d}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(HModuleAction {
            hopf,
            labels,
            matrices,
        })
    }

    pub fn hopf(&self) -> &WeakHopfPresentation {
        &self.hopf
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn carrier_dim(&self) -> usize {
        self.labels.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `ρ(h)` for an arbitrary element `h`.
    pub fn rho(&self, h: &[Scalar]) -> Matrix {
        let d = self.carrier_dim();
        let mut out = Matrix::zeros(d, d);
        for (c, m) in h.iter().zip(&self.matrices) {
            if !c.is_zero() {
                out = out.add(&m.scale(c)).expect("square");
            }
        }
        out
    }

    /// The annihilator `{h : ρ(h) = 0}`.
    pub fn annihilator(&self) -> Subspace {
        let cols: Vec<Vec<Scalar>> = self.matrices.iter().map(Matrix::to_flat).collect();
        let d = self.carrier_dim();
        Matrix::from_columns(d * d, &cols)
            .expect("uniform shape")
            .kernel()
    }
}

/// `ρ(b_i)ρ(b_j) = ρ(b_i b_j)` and `ρ(1_H) = id`.
pub fn check_h_module(act: &HModuleAction) -> Report {
    let h = &act.hopf;
    let n = h.dim();
    let labels = h.labels();
    let mut rep = Check::new("representation");
    let partial: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("representation");
            for j in 0..n {
                let lhs = act.matrices[i].dot(&act.matrices[j]);
                let rhs = act.rho(&h.algebra().product_vec(i, j));
                let diff = lhs.sub(&rhs).expect("square");
                c.record(diff.is_zero(), || {
                    Witness::new([labels[i].clone(), labels[j].clone()])
                        .sparse_residual(matrix_residual(&diff, &act.labels, &act.labels))
                });
            }
            c
        })
        .collect();
    for c in partial {
        rep.absorb(c);
    }
    let mut unit = Check::new("unit");
    let diff = act
        .rho(h.unit())
        .sub(&Matrix::identity(act.carrier_dim()))
        .expect("square");
    unit.record(diff.is_zero(), || {
        Witness::new(["1"]).sparse_residual(matrix_residual(&diff, &act.labels, &act.labels))
    });
    Report {
        checks: vec![rep, unit],
    }
}

/// Module checks plus `h·(ab) = (h₁·a)(h₂·b)` and `h·1_A = ε_t(h)·1_A` on all basis triples.
pub fn check_h_module_algebra(
    act: &HModuleAction,
    a: &FiniteDimAlgebra,
) -> Result<Report, ModuleError> {
    if a.dim() != act.carrier_dim() {
        return Err(ModuleError::Shape(format!(
            "algebra has dim {}, carrier has dim {}",
            a.dim(),
            act.carrier_dim()
        )));
    }
    let h = &act.hopf;
    let n = h.dim();
    let d = a.dim();
    let hl = h.labels();
    let al = a.labels();
    let mut report = check_h_module(act);
    let partial: Vec<Check> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new("multiplicativity");
            let delta = h.delta(&unit_vec(n, i));
            for x in 0..d {
                for y in 0..d {
                    let lhs = act.matrices[i].apply(&a.product_vec(x, y));
                    let mut rhs = zero_vec(d);
                    for (k, coeff) in &delta {
                        let left = act.matrices[k[0]].column(x);
                        let right = act.matrices[k[1]].column(y);
                        crate::exact::axpy(&mut rhs, coeff, &a.mul(&left, &right));
                    }
                    let diff = sub_vec(&lhs, &rhs);
                    c.record(is_zero_vec(&diff), || {
                        Witness::new([hl[i].clone(), al[x].clone(), al[y].clone()])
                            .residual(al, &diff)
                    });
                }
            }
            c
        })
        .collect();
    let mut mult = Check::new("multiplicativity");
    for c in partial {
        mult.absorb(c);
    }
    let maps = counital_maps(h);
    let mut unital = Check::new("unitality");
    for i in 0..n {
        let lhs = act.matrices[i].apply(a.unit());
        let rhs = act.rho(&maps.eps_t.column(i)).apply(a.unit());
        let diff = sub_vec(&lhs, &rhs);
        unital.record(is_zero_vec(&diff), || {
            Witness::new([hl[i].clone()]).residual(al, &diff)
        });
    }
    report.push(mult);
    report.push(unital);
    Ok(report)
}

/// The `kG`-module obtained by letting each morphism act by its padded structure map.
pub fn linearize_action(act: &GroupoidAction) -> Result<HModuleAction, ModuleError> {
    let g = &act.groupoid;
    let kg = groupoid_algebra(g)?;
    let pos = g.basis_position();
    let d = act.carrier.dim();
    let mut matrices = vec![Matrix::zeros(d, d); g.num_morphisms()];
    for m in 0..g.num_morphisms() {
        let mut padded = Matrix::zeros(d, d);
        padded.set_block(
            act.carrier.offset(g.target(m)),
            act.carrier.offset(g.source(m)),
            &act.maps[m],
        );
        matrices[pos[m]] = padded;
    }
    HModuleAction::new(kg, act.carrier.labels.clone(), matrices)
}

/// Output of [`decompose_from_idempotents`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The idempotents `e_i` of `H_t` used, labelled.
    pub idempotents: Vec<(String, Vec<Scalar>)>,
    pub algebra: XDecompAlgebra,
    /// Columns are the basis of the decomposed algebra written in the original basis of `A`.
    pub embedding: Matrix,
    pub report: Report,
}

/// Primitive orthogonal idempotents of `H_t` (which is commutative when `H_s = H_t`).
pub fn target_idempotents(
    h: &WeakHopfPresentation,
) -> Result<Vec<(String, Vec<Scalar>)>, ModuleError> {
    let maps = counital_maps(h);
    let labels = (0..maps.target.dim()).map(|i| format!("t{i}")).collect();
    let (ht, embed) = h.algebra().restrict(&maps.target, h.unit(), labels)?;
    let split = split_commutative(&ht)?;
    if !split.complete {
        return Err(ModuleError::InvalidIdempotents(
            "H_t does not split over the rationals".into(),
        ));
    }
    let mut out: Vec<Vec<Scalar>> = split.idempotents.iter().map(|e| embed.apply(e)).collect();
    out.sort();
    Ok(out
        .into_iter()
        .map(|e| (combination(h.labels(), &e), e))
        .collect())
}

/// Splits an `H`-module algebra along `e_i·1_A` for a complete family of primitive orthogonal
/// idempotents of `H_t`, when `H_s = H_t`.
pub fn decompose_from_idempotents(
    act: &HModuleAction,
    a: &FiniteDimAlgebra,
    idempotents: Option<Vec<(String, Vec<Scalar>)>>,
) -> Result<Decomposition, ModuleError> {
    let h = &act.hopf;
    let n = h.dim();
    let maps = counital_maps(h);
    if maps.source != maps.target {
        return Err(ModuleError::SourceTargetDiffer);
    }
    let idems = match idempotents {
        Some(v) => v,
        None => target_idempotents(h)?,
    };
    let halg = h.algebra();
    let mut total = zero_vec(n);
    for (x, e) in &idems {
        if e.len() != n {
            return Err(ModuleError::InvalidIdempotents(format!(
                "`{x}` has the wrong length"
            )));
        }
        if !maps.target.contains(e)? {
            return Err(ModuleError::InvalidIdempotents(format!(
                "`{x}` is not in H_t"
            )));
        }
        if halg.mul(e, e) != *e || is_zero_vec(e) {
            return Err(ModuleError::InvalidIdempotents(format!(
                "`{x}` is not a nonzero idempotent"
            )));
        }
        let multiples: Vec<Vec<Scalar>> =
            maps.target.basis().iter().map(|t| halg.mul(t, e)).collect();
        if Subspace::span(n, &multiples)?.dim() != 1 {
            return Err(ModuleError::InvalidIdempotents(format!(
                "`{x}` is not primitive: dim(H_t·e) ≠ 1"
            )));
        }
        total = crate::exact::add_vec(&total, e);
    }
    for (i, (x, e)) in idems.iter().enumerate() {
        for (y, f) in &idems[i + 1..] {
            if !is_zero_vec(&halg.mul(e, f)) {
                return Err(ModuleError::InvalidIdempotents(format!(
                    "`{x}` and `{y}` are not orthogonal"
                )));
            }
        }
    }
    if total != h.unit() {
        return Err(ModuleError::InvalidIdempotents(
            "the family does not sum to 1_H".into(),
        ));
    }

    let mut report = Report::new();
    let mut grouplike = Check::new("grouplike");
    for (x, e) in &idems {
        let diff = tensor_sub(&h.delta(e), &tensor_of(&[e, e]));
        grouplike.record(diff.is_empty(), || {
            Witness::new([x.clone()]).sparse_residual(tensor_residual(&diff, h.labels()))
        });
    }
    report.push(grouplike);

    let local: Vec<(String, Vec<Scalar>)> = idems
        .iter()
        .map(|(x, e)| (x.clone(), act.rho(e).apply(a.unit())))
        .collect();
    report.extend_prefixed("local_identities", check_local_identities(a, &local));

    let mut components = Vec::new();
    let mut columns = Vec::new();
    for (x, f) in &local {
        let block = a.left_mul_matrix(f).image();
        let basis = block.basis();
        let labels: Vec<String> = basis
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
                if nz.len() == 1 && v[nz[0]].is_one() {
                    a.labels()[nz[0]].clone()
                } else {
                    format!("{x}.{k}")
                }
            })
            .collect();
        let (comp, _) = a.restrict(&block, f, labels)?;
        components.push(comp);
        columns.extend(basis);
    }
    let mut support = Check::new("component_support");
    for (y, e) in &idems {
        let rho = act.rho(e);
        for (x, f) in &local {
            if x == y {
                continue;
            }
            let block = a.left_mul_matrix(f).image();
            for v in block.basis() {
                let image = rho.apply(&v);
                support.record(is_zero_vec(&image), || {
                    Witness::new([y.clone(), x.clone()]).residual(a.labels(), &image)
                });
            }
        }
    }
    report.push(support);
    let algebra = XDecompAlgebra::new(idems.iter().map(|(x, _)| x.clone()).collect(), components)?;
    let embedding = Matrix::from_columns(a.dim(), &columns)?;
    Ok(Decomposition {
        idempotents: idems,
        algebra,
        embedding,
        report,
    })
}

/// Two-sided ideal generated by `gens`.
pub fn ideal_from_generators(
    h: &WeakHopfPresentation,
    gens: &[Vec<Scalar>],
) -> Result<Subspace, ModuleError> {
    let span = Subspace::span(h.dim(), gens)?;
    Ok(h.algebra().ideal_closure(&span))
}

/// A subspace of `H` together with its Hopf-ideal certificate.
#[derive(Clone, Debug)]
pub struct HopfIdealWitness {
    pub ideal: Subspace,
    pub report: Report,
}

impl HopfIdealWitness {
    pub fn certified(&self) -> bool {
        self.report.passed()
    }

    /// Basis vectors in display form (trailing coefficient 1).
    pub fn display(&self, labels: &[String]) -> Vec<String> {
        self.ideal
            .basis()
            .iter()
            .map(|v| combination(labels, &normalize_trailing(v)))
            .collect()
    }
}

/// `H I H ⊆ I`, `Δ(I) ⊆ I⊗H + H⊗I`, `ε(I) = 0` and `S(I) ⊆ I`.
pub fn is_hopf_ideal(
    h: &WeakHopfPresentation,
    ideal: &Subspace,
) -> Result<HopfIdealWitness, ModuleError> {
    let n = h.dim();
    if ideal.ambient_dim() != n {
        return Err(ModuleError::Exact(ExactError::AmbientMismatch {
            left: n,
            right: ideal.ambient_dim(),
        }));
    }
    let s = h.require_antipode()?;
    let labels = h.labels();
    let basis = ideal.basis();
    let q = ideal.quotient_map();
    let qlabels: Vec<String> = ideal
        .complement_indices()
        .iter()
        .map(|&j| format!("[{}]", labels[j]))
        .collect();

    let mut two_sided = Check::new("ideal");
    for (k, v) in basis.iter().enumerate() {
        for i in 0..n {
            for (side, p) in [
                ("left", h.algebra().mul_basis_left(i, v)),
                ("right", h.algebra().mul_basis_right(v, i)),
            ] {
                let r = q.apply(&p);
                two_sided.record(is_zero_vec(&r), || {
                    Witness::new([format!("v{k}"), labels[i].clone(), side.to_string()])
                        .residual(&qlabels, &r)
                });
            }
        }
    }
    let mut coideal = Check::new("coideal");
    let mut counit = Check::new("counit");
    let mut antipode = Check::new("antipode");
    for (k, v) in basis.iter().enumerate() {
        let delta = h.delta(v);
        let mut projected = Tensor::new();
        for (key, c) in &delta {
            let a = q.column(key[0]);
            let b = q.column(key[1]);
            for (kk, cc) in tensor_of(&[&a, &b]) {
                let e = projected.entry(kk).or_insert_with(Scalar::zero);
                *e += c * cc;
            }
        }
        projected.retain(|_, c| !c.is_zero());
        coideal.record(projected.is_empty(), || {
            Witness::new([format!("v{k}")])
                .sparse_residual(tensor_residual(&projected, &qlabels))
                .value("element", v.clone())
        });
        let e = h.eps(v);
        counit.record(e.is_zero(), || {
            Witness::new([format!("v{k}")])
                .sparse_residual(vec![("ε".into(), e.clone())])
                .value("element", v.clone())
        });
        let r = q.apply(&s.apply(v));
        antipode.record(is_zero_vec(&r), || {
            Witness::new([format!("v{k}")])
                .residual(&qlabels, &r)
                .value("element", v.clone())
        });
    }
    Ok(HopfIdealWitness {
        ideal: ideal.clone(),
        report: Report {
            checks: vec![two_sided, coideal, counit, antipode],
        },
    })
}

/// Largest two-sided ideal contained in `w`.
fn largest_ideal_inside(alg: &FiniteDimAlgebra, w: &Subspace) -> Result<Subspace, ModuleError> {
    let n = alg.dim();
    let mut cur = w.clone();
    loop {
        let p = cur.quotient_map();
        let mut stacked = Matrix::zeros(0, n);
        for i in 0..n {
            let e = unit_vec(n, i);
            stacked = stacked.vstack(&p.dot(&alg.left_mul_matrix(&e)))?;
            stacked = stacked.vstack(&p.dot(&alg.right_mul_matrix(&e)))?;
        }
        let next = stacked.kernel().intersection(&cur)?;
        if next.dim() == cur.dim() {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Largest coideal annihilated by `ε` inside `w`, as the annihilator of the subalgebra of `H*`
/// generated by `w⊥` and `ε`.
fn largest_coideal_inside(h: &WeakHopfPresentation, w: &Subspace) -> Result<Subspace, ModuleError> {
    let dual = dual_algebra(h.coalgebra());
    let mut gens = w.annihilator().basis();
    gens.push(h.coalgebra().counit().to_vec());
    let sub = dual.multiplicative_closure(&Subspace::span(h.dim(), &gens)?);
    Ok(sub.annihilator())
}

/// Largest Hopf ideal contained in `w`, by a decreasing fixed point of the ideal, coideal and
/// antipode conditions. The result is certified with [`is_hopf_ideal`].
pub fn largest_hopf_ideal_in(
    h: &WeakHopfPresentation,
    w: &Subspace,
) -> Result<HopfIdealWitness, ModuleError> {
    let s = h.require_antipode()?;
    if w.ambient_dim() != h.dim() {
        return Err(ModuleError::Exact(ExactError::AmbientMismatch {
            left: h.dim(),
            right: w.ambient_dim(),
        }));
    }
    let mut cur = w.clone();
    loop {
        let before = cur.dim();
        cur = largest_ideal_inside(h.algebra(), &cur)?;
        cur = largest_coideal_inside(h, &cur)?;
        cur = cur.intersection(&cur.preimage(s)?)?;
        if cur.dim() == before {
            break;
        }
    }
    let witness = is_hopf_ideal(h, &cur)?;
    if !witness.certified() {
        return Err(ModuleError::Uncertified(
            witness.report.failed_checks().join(", "),
        ));
    }
    Ok(witness)
}

/// Outcome of [`inner_faithful`].
#[derive(Clone, Debug)]
pub struct InnerFaithfulness {
    pub faithful: bool,
    pub annihilator: Subspace,
    pub ideal: HopfIdealWitness,
}

/// The action is inner faithful iff the largest Hopf ideal inside its annihilator is zero.
pub fn inner_faithful(act: &HModuleAction) -> Result<InnerFaithfulness, ModuleError> {
    let ann = act.annihilator();
    let ideal = largest_hopf_ideal_in(&act.hopf, &ann)?;
    Ok(InnerFaithfulness {
        faithful: ideal.ideal.is_zero(),
        annihilator: ann,
        ideal,
    })
}

/// `V ⊗ W` with components `V_x ⊗ W_x` and structure maps `ν_g ⊗ ω_g`.
pub fn tensor_action(
    v: &GroupoidAction,
    w: &GroupoidAction,
) -> Result<GroupoidAction, ModuleError> {
    if v.groupoid != w.groupoid {
        return Err(ModuleError::GroupoidMismatch);
    }
    let objects = v.carrier.objects.clone();
    let dims: Vec<usize> = v
        .carrier
        .dims
        .iter()
        .zip(&w.carrier.dims)
        .map(|(a, b)| a * b)
        .collect();
    let mut labels = Vec::new();
    for x in 0..objects.len() {
        for a in v.carrier.block_labels(x) {
            for b in w.carrier.block_labels(x) {
                labels.push(format!("{a}⊗{b}"));
            }
        }
    }
    let carrier = Carrier::space(objects, dims, labels)?;
    let maps = v
        .maps
        .iter()
        .zip(&w.maps)
        .map(|(a, b)| a.kronecker(b))
        .collect();
    GroupoidAction::new(v.groupoid.clone(), carrier, maps)
}

/// The monoidal unit `⊕_x k` with identity structure maps, as an algebra carrier.
pub fn unit_action(g: &FiniteGroupoid) -> Result<GroupoidAction, ModuleError> {
    let comps = g
        .objects()
        .iter()
        .map(|x| {
            FiniteDimAlgebra::new(
                vec![format!("1_{x}")],
                [(0, 0, 0, Scalar::one())],
                vec![Scalar::one()],
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let alg = XDecompAlgebra::new(g.objects().to_vec(), comps)?;
    GroupoidAction::identity(g.clone(), Carrier::algebra(alg))
}

/// `ω_g f_{s(g)} = f_{t(g)} ν_g` for a family `f_x: V_x -> W_x`.
pub fn check_module_morphism(
    v: &GroupoidAction,
    w: &GroupoidAction,
    f: &[Matrix],
) -> Result<Report, ModuleError> {
    if v.groupoid != w.groupoid {
        return Err(ModuleError::GroupoidMismatch);
    }
    let g = &v.groupoid;
    if f.len() != g.objects().len() {
        return Err(ModuleError::Shape(
            "one component map per object is required".into(),
        ));
    }
    for (x, fx) in f.iter().enumerate() {
        if fx.rows() != w.carrier.dims[x] || fx.cols() != v.carrier.dims[x] {
            return Err(ModuleError::Shape(format!(
                "component map at `{}` has the wrong shape",
                g.objects()[x]
            )));
        }
    }
    let mut c = Check::new("intertwining");
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let diff = w.maps[m].dot(&f[s]).sub(&f[t].dot(&v.maps[m]))?;
        c.record(diff.is_zero(), || {
            Witness::new([g.label(m)]).sparse_residual(matrix_residual(
                &diff,
                w.carrier.block_labels(t),
                v.carrier.block_labels(s),
            ))
        });
    }
    Ok(Report { checks: vec![c] })
}

/// Source or target of a map checked by [`check_x_map`].
#[derive(Clone, Copy, Debug)]
pub enum XStructure<'a> {
    Algebra(&'a FiniteDimAlgebra),
    WeakHopf(&'a WeakHopfPresentation),
}

impl<'a> XStructure<'a> {
    fn algebra(&self) -> &'a FiniteDimAlgebra {
        match self {
            XStructure::Algebra(a) => a,
            XStructure::WeakHopf(h) => h.algebra(),
        }
    }
}

/// Unital algebra map, idempotent preservation `f(e_x) = e_x` (when both families are given),
/// and in weak Hopf mode compatibility with `Δ`, `ε` and `S`.
pub fn check_x_map(
    f: &Matrix,
    source: XStructure<'_>,
    source_idempotents: Option<&[(String, Vec<Scalar>)]>,
    target: XStructure<'_>,
    target_idempotents: Option<&[(String, Vec<Scalar>)]>,
) -> Result<Report, ModuleError> {
    let (a, b) = (source.algebra(), target.algebra());
    if f.rows() != b.dim() || f.cols() != a.dim() {
        return Err(ModuleError::Shape(format!(
            "map is {}x{}, expected {}x{}",
            f.rows(),
            f.cols(),
            b.dim(),
            a.dim()
        )));
    }
    let bl = b.labels();
    let mut report = Report::new();
    let mut unit = Check::new("unit");
    let u = f.apply(a.unit());
    unit.record(u.as_slice() == b.unit(), || {
        Witness::new(["1"])
            .residual(bl, &sub_vec(&u, b.unit()))
            .value("image", u.clone())
    });
    report.push(unit);
    let mut mult = Check::new("multiplicativity");
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let d = sub_vec(
                &f.apply(&a.product_vec(i, j)),
                &b.mul(&f.column(i), &f.column(j)),
            );
            mult.record(is_zero_vec(&d), || {
                Witness::new([a.labels()[i].clone(), a.labels()[j].clone()]).residual(bl, &d)
            });
        }
    }
    report.push(mult);
    if let (Some(si), Some(ti)) = (source_idempotents, target_idempotents) {
        let mut idem = Check::new("idempotents");
        for (x, e) in si {
            let image = f.apply(e);
            match ti.iter().find(|(y, _)| y == x) {
                Some((_, t)) => idem.record(image == *t, || {
                    Witness::new([x.clone()]).residual(bl, &sub_vec(&image, t))
                }),
                None => idem.fail(Witness::new([x.clone()]).value("image", image)),
            }
        }
        report.push(idem);
    }
    if let (XStructure::WeakHopf(h1), XStructure::WeakHopf(h2)) = (source, target) {
        let mut comult = Check::new("comultiplicativity");
        let mut counit = Check::new("counit");
        let mut antipode = Check::new("antipode");
        for i in 0..h1.dim() {
            let e = unit_vec(h1.dim(), i);
            let image = f.column(i);
            let mut pushed = Tensor::new();
            for (k, c) in h1.delta(&e) {
                for (kk, cc) in tensor_of(&[&f.column(k[0]), &f.column(k[1])]) {
                    *pushed.entry(kk).or_insert_with(Scalar::zero) += &c * cc;
                }
            }
            pushed.retain(|_, c| !c.is_zero());
            let diff = tensor_sub(&h2.delta(&image), &pushed);
            comult.record(diff.is_empty(), || {
                Witness::new([h1.labels()[i].clone()])
                    .sparse_residual(tensor_residual(&diff, h2.labels()))
            });
            let de = h2.eps(&image) - h1.eps(&e);
            counit.record(de.is_zero(), || {
                Witness::new([h1.labels()[i].clone()])
                    .sparse_residual(vec![("ε".into(), de.clone())])
            });
            if let (Some(s1), Some(s2)) = (h1.antipode(), h2.antipode()) {
                let d = sub_vec(&s2.apply(&image), &f.apply(&s1.column(i)));
                antipode.record(is_zero_vec(&d), || {
                    Witness::new([h1.labels()[i].clone()]).residual(bl, &d)
                });
            }
        }
        report.push(comult);
        report.push(counit);
        report.push(antipode);
    }
    Ok(report)
}
