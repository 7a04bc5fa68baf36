//! Smash products `H # kG` of an object-graded weak Hopf algebra `H = ⊕_x H_x` with a groupoid
//! algebra, their weak Hopf structure, base idempotents and induced module actions.

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{
    is_zero_vec, sub_vec, unit_vec, zero_vec, ExactError, Matrix, Scalar, Subspace,
};
use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::module_alg::{
    check_groupoid_module, check_groupoid_module_algebra, GroupoidAction, HModuleAction,
    ModuleError, XDecompAlgebra,
};
use crate::report::{Check, Report, Witness};
use crate::walg::{
    counital_maps, direct_sum, tensor_of, tensor_residual, tensor_sub, FiniteDimAlgebra,
    FiniteDimCoalgebra, Tensor, WalgError, WeakHopfPresentation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmashError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the groupoid action is not a module algebra action; failed checks: {0}")]
    NotModuleAlgebra(String),
    #[error("the smash product is algebra-only because the smash conditions fail")]
    AlgebraOnly,
    #[error("actions are incompatible at morphism `{morphism}` and element `{element}`")]
    Incompatible { morphism: String, element: String },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Walg(#[from] WalgError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `H = ⊕_x H_x` as a direct sum of weak Hopf algebras indexed by objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedWeakHopf {
    objects: Vec<String>,
    components: Vec<WeakHopfPresentation>,
    offsets: Vec<usize>,
    total: WeakHopfPresentation,
}

impl DecomposedWeakHopf {
    pub fn new(
        objects: Vec<String>,
        components: Vec<WeakHopfPresentation>,
    ) -> Result<Self, SmashError> {
        if objects.len() != components.len() || objects.is_empty() {
            return Err(SmashError::Shape(
                "one nonempty list of components, one per object, is required".into(),
            ));
        }
        let total = direct_sum(&components)?;
        let mut offsets = Vec::new();
        let mut acc = 0;
        for c in &components {
            offsets.push(acc);
            acc += c.dim();
        }
        Ok(DecomposedWeakHopf {
            objects,
            components,
            offsets,
            total,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn components(&self) -> &[WeakHopfPresentation] {
        &self.components
    }

    pub fn total(&self) -> &WeakHopfPresentation {
        &self.total
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    /// The underlying object-graded algebra.
    pub fn as_xdecomp(&self) -> Result<XDecompAlgebra, SmashError> {
        let algs = self
            .components
            .iter()
            .map(|c| c.algebra().clone())
            .collect();
        Ok(XDecompAlgebra::new(self.objects.clone(), algs)?)
    }

    fn embed(&self, x: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.total.dim());
        out[self.offsets[x]..self.offsets[x] + v.len()].clone_from_slice(v);
        out
    }
}

fn ensure_matching(h: &DecomposedWeakHopf, act: &GroupoidAction) -> Result<(), SmashError> {
    let carrier = act
        .carrier()
        .as_algebra()
        .ok_or(ModuleError::NotAlgebraCarrier)?;
    if carrier.objects() != h.objects() {
        return Err(SmashError::Shape(
            "action objects differ from the components of H".into(),
        ));
    }
    for (x, c) in h.components.iter().enumerate() {
        if carrier.component(x) != c.algebra() {
            return Err(SmashError::Shape(format!(
                "carrier component `{}` differs from H_x",
                h.objects[x]
            )));
        }
    }
    Ok(())
}

/// Module and module-algebra checks of the action, then `Δ(g·a) = g·a₁ ⊗ g·a₂` and
/// `ε(g·a) = ε(a)` for every morphism `g` and basis element `a` of `H_{s(g)}`.
pub fn check_smash_conditions(
    h: &DecomposedWeakHopf,
    act: &GroupoidAction,
) -> Result<Report, SmashError> {
    ensure_matching(h, act)?;
    let mut report = Report::new();
    report.extend_prefixed("module", check_groupoid_module(act));
    report.extend_prefixed("module_algebra", check_groupoid_module_algebra(act)?);
    let g = act.groupoid();
    let mut comult = Check::new("comultiplicativity");
    let mut counit = Check::new("counit");
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let (src, tgt) = (&h.components[s], &h.components[t]);
        let nu = act.map(m);
        for i in 0..src.dim() {
            let a = unit_vec(src.dim(), i);
            let image = nu.apply(&a);
            let mut pushed = Tensor::new();
            for (k, c) in src.delta(&a) {
                for (kk, cc) in tensor_of(&[&nu.column(k[0]), &nu.column(k[1])]) {
                    *pushed.entry(kk).or_insert_with(Scalar::zero) += &c * cc;
                }
            }
            pushed.retain(|_, c| !c.is_zero());
            let diff = tensor_sub(&tgt.delta(&image), &pushed);
            comult.record(diff.is_empty(), || {
                Witness::new([g.label(m).to_string(), src.labels()[i].clone()])
                    .sparse_residual(tensor_residual(&diff, tgt.labels()))
            });
            let de = tgt.eps(&image) - src.eps(&a);
            counit.record(de.is_zero(), || {
                Witness::new([g.label(m).to_string(), src.labels()[i].clone()])
                    .sparse_residual(vec![("ε".into(), de.clone())])
            });
        }
    }
    report.push(comult);
    report.push(counit);
    Ok(report)
}

/// Basis element `a # g` with `a` the `local`-th basis vector of `H_{t(g)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmashBasisElement {
    pub local: usize,
    pub morphism: usize,
}

#[derive(Clone, Debug)]
pub struct SmashProduct {
    pub algebra: FiniteDimAlgebra,
    /// The full weak Hopf structure; `None` exactly when `algebra_only` is set.
    pub hopf: Option<WeakHopfPresentation>,
    pub algebra_only: bool,
    pub basis: Vec<SmashBasisElement>,
    pub conditions: Report,
    groupoid: FiniteGroupoid,
    objects: Vec<String>,
    base: DecomposedWeakHopf,
    structure_maps: Vec<Matrix>,
}

impl SmashProduct {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    fn index_of(&self, local: usize, morphism: usize) -> usize {
        self.basis
            .iter()
            .position(|b| b.local == local && b.morphism == morphism)
            .expect("basis element exists")
    }

    /// The element `a # g` for `a ∈ H_{t(g)}` in local coordinates.
    pub fn element(&self, a: &[Scalar], morphism: usize) -> Vec<Scalar> {
        let mut out = zero_vec(self.dim());
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out[self.index_of(i, morphism)] += c;
            }
        }
        out
    }

    pub fn require_hopf(&self) -> Result<&WeakHopfPresentation, SmashError> {
        self.hopf.as_ref().ok_or(SmashError::AlgebraOnly)
    }
}

/// Builds `H # kG` on the basis `a # g` (`a` over a basis of `H_{t(g)}`, morphisms in `kG` basis
/// order) with `(a#h)(b#g) = [s(h) = t(g)] a ν_h(b) # hg`. When the smash conditions fail only
/// the algebra is returned and `algebra_only` is set.
pub fn build_smash(
    h: &DecomposedWeakHopf,
    act: &GroupoidAction,
) -> Result<SmashProduct, SmashError> {
    let conditions = check_smash_conditions(h, act)?;
    let module_failures: Vec<&str> = conditions
        .failed_checks()
        .into_iter()
        .filter(|c| c.starts_with("module"))
        .collect();
    if !module_failures.is_empty() {
        return Err(SmashError::NotModuleAlgebra(module_failures.join(", ")));
    }
    let g = act.groupoid();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for m in g.algebra_basis_order() {
        let t = g.target(m);
        for (i, l) in h.components[t].labels().iter().enumerate() {
            basis.push(SmashBasisElement {
                local: i,
                morphism: m,
            });
            labels.push(format!("{l}#{}", g.label(m)));
        }
    }
    let n = basis.len();
    let index = |local: usize, morphism: usize| {
        basis
            .iter()
            .position(|b| b.local == local && b.morphism == morphism)
            .expect("basis element exists")
    };
    let mut entries = Vec::new();
    for (p, left) in basis.iter().enumerate() {
        let hm = left.morphism;
        let comp = &h.components[g.target(hm)];
        for (q, right) in basis.iter().enumerate() {
            let gm = right.morphism;
            let Some(hg) = g.compose(hm, gm) else {
                continue;
            };
            let moved = act
                .map(hm)
                .apply(&unit_vec(h.components[g.target(gm)].dim(), right.local));
            let prod = comp.mul(&unit_vec(comp.dim(), left.local), &moved);
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((p, q, index(k, hg), c));
                }
            }
        }
    }
    let mut unit = zero_vec(n);
    for x in 0..g.objects().len() {
        let e = g.identity(x);
        for (k, c) in h.components[x].unit().iter().enumerate() {
            if !c.is_zero() {
                unit[index(k, e)] += c;
            }
        }
    }
    let algebra = FiniteDimAlgebra::new(labels.clone(), entries, unit)?;
    let mut smash = SmashProduct {
        algebra,
        hopf: None,
        algebra_only: true,
        basis: basis.clone(),
        conditions,
        groupoid: g.clone(),
        objects: h.objects.clone(),
        base: h.clone(),
        structure_maps: act.maps().to_vec(),
    };
    if !smash.conditions.passed() {
        return Ok(smash);
    }
    let mut comult = Vec::new();
    let mut counit = zero_vec(n);
    let mut s = Matrix::zeros(n, n);
    for (p, b) in basis.iter().enumerate() {
        let comp = &h.components[g.target(b.morphism)];
        let a = unit_vec(comp.dim(), b.local);
        for (k, c) in comp.delta(&a) {
            comult.push((p, index(k[0], b.morphism), index(k[1], b.morphism), c));
        }
        counit[p] = comp.eps(&a);
        let inv = g.inverse(b.morphism);
        let sa = comp.require_antipode()?.apply(&a);
        let image = act.map(inv).apply(&sa);
        for (k, c) in image.into_iter().enumerate() {
            if !c.is_zero() {
                s[(index(k, inv), p)] += c;
            }
        }
    }
    let coalgebra = FiniteDimCoalgebra::new(labels, comult, counit)?;
    smash.hopf = Some(WeakHopfPresentation::new(
        smash.algebra.clone(),
        coalgebra,
        Some(s),
    )?);
    smash.algebra_only = false;
    Ok(smash)
}

/// `f_x = 1_{H_x} # e_x`: complete, orthogonal, primitive in `(H#kG)_t`, grouplike, and
/// `(H#kG)_s = (H#kG)_t = span{f_x}`.
pub fn smash_base_idempotents(
    sp: &SmashProduct,
) -> Result<(Vec<(String, Vec<Scalar>)>, Report), SmashError> {
    let hopf = sp.require_hopf()?;
    let g = &sp.groupoid;
    let n = sp.dim();
    let labels = sp.labels();
    let idems: Vec<(String, Vec<Scalar>)> = (0..g.objects().len())
        .map(|x| {
            (
                format!("f_{}", sp.objects[x]),
                sp.element(sp.base.components[x].unit(), g.identity(x)),
            )
        })
        .collect();
    let alg = &sp.algebra;
    let maps = counital_maps(hopf);

    let mut idempotent = Check::new("idempotent");
    let mut orthogonal = Check::new("orthogonal");
    let mut complete = Check::new("complete");
    let mut primitive = Check::new("primitive");
    let mut grouplike = Check::new("grouplike");
    let mut sum = zero_vec(n);
    for (i, (x, f)) in idems.iter().enumerate() {
        let sq = alg.mul(f, f);
        idempotent.record(sq == *f, || {
            Witness::new([x.clone()]).residual(labels, &sub_vec(&sq, f))
        });
        for (y, e) in &idems[i + 1..] {
            let p = alg.mul(f, e);
            let q = alg.mul(e, f);
            orthogonal.record(is_zero_vec(&p) && is_zero_vec(&q), || {
                Witness::new([x.clone(), y.clone()]).residual(labels, &p)
            });
        }
        let multiples: Vec<Vec<Scalar>> =
            maps.target.basis().iter().map(|t| alg.mul(t, f)).collect();
        let d = Subspace::span(n, &multiples)?.dim();
        primitive.record(d == 1, || {
            Witness::new([x.clone()]).value("dim", vec![Scalar::from_integer(d.into())])
        });
        let diff = tensor_sub(&hopf.delta(f), &tensor_of(&[f, f]));
        grouplike.record(diff.is_empty(), || {
            Witness::new([x.clone()]).sparse_residual(tensor_residual(&diff, labels))
        });
        sum = crate::exact::add_vec(&sum, f);
    }
    let d = sub_vec(&sum, alg.unit());
    complete.record(is_zero_vec(&d), || {
        Witness::new(["sum"]).residual(labels, &d)
    });

    let span = Subspace::span(n, &idems.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>())?;
    let mut counital = Check::new("counital_subalgebras");
    counital.record(maps.source == span, || {
        Witness::new(["H_s"]).value("dim", vec![Scalar::from_integer(maps.source.dim().into())])
    });
    counital.record(maps.target == span, || {
        Witness::new(["H_t"]).value("dim", vec![Scalar::from_integer(maps.target.dim().into())])
    });
    let report = Report {
        checks: vec![
            idempotent, orthogonal, complete, primitive, grouplike, counital,
        ],
    };
    Ok((idems, report))
}

/// `ρ(a#g) = ρ_H(a) ρ_G(g)` after certifying `ρ_H(g·h) = ρ_G(g) ρ_H(h) ρ_G(g⁻¹)` for every
/// morphism `g` and basis element `h` of `H_{s(g)}`. `act_h` is over `H` (the direct sum) and
/// `act_g` is over `kG`, both on the same carrier.
pub fn smash_module_action(
    sp: &SmashProduct,
    act_h: &HModuleAction,
    act_g: &HModuleAction,
) -> Result<HModuleAction, SmashError> {
    let hopf = sp.require_hopf()?;
    let g = &sp.groupoid;
    if act_h.hopf() != sp.base.total() {
        return Err(SmashError::Shape(
            "the first action must be over the base weak Hopf algebra".into(),
        ));
    }
    if act_g.hopf().dim() != g.num_morphisms()
        || act_g.hopf().labels() != sp_group_labels(g).as_slice()
    {
        return Err(SmashError::Shape(
            "the second action must be over the groupoid algebra".into(),
        ));
    }
    if act_h.labels() != act_g.labels() {
        return Err(SmashError::Shape(
            "both actions must share a carrier".into(),
        ));
    }
    let pos = g.basis_position();
    for m in 0..g.num_morphisms() {
        let (s, t) = (g.source(m), g.target(m));
        let src = &sp.base.components[s];
        let rho_g = &act_g.matrices()[pos[m]];
        let rho_ginv = &act_g.matrices()[pos[g.inverse(m)]];
        for i in 0..src.dim() {
            let h_elem = sp.base.embed(s, &unit_vec(src.dim(), i));
            let moved = sp.base.embed(t, &sp.structure_maps[m].column(i));
            let lhs = act_h.rho(&moved);
            let rhs = rho_g.dot(&act_h.rho(&h_elem)).dot(rho_ginv);
            if lhs != rhs {
                return Err(SmashError::Incompatible {
                    morphism: g.label(m).to_string(),
                    element: src.labels()[i].clone(),
                });
            }
        }
    }
    let mut matrices = Vec::with_capacity(sp.dim());
    for b in &sp.basis {
        let t = g.target(b.morphism);
        let a = sp
            .base
            .embed(t, &unit_vec(sp.base.components[t].dim(), b.local));
        matrices.push(act_h.rho(&a).dot(&act_g.matrices()[pos[b.morphism]]));
    }
    Ok(HModuleAction::new(
        hopf.clone(),
        act_h.labels().to_vec(),
        matrices,
    )?)
}

fn sp_group_labels(g: &FiniteGroupoid) -> Vec<String> {
    g.algebra_basis_order()
        .into_iter()
        .map(|m| g.label(m).to_string())
        .collect()
}
