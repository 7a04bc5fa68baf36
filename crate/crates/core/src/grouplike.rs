//! Grouplike elements, the groupoid `Γ(H)` they form, and local units of algebras with a chosen
//! family of idempotents.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{is_zero_vec, sub_vec, ExactError, Matrix, Scalar, Subspace};
use crate::groupoid::{FiniteGroupoid, GroupoidError, Morphism};
use crate::report::{combination, Check, Report, Witness};
use crate::split::{rational_characters, split_commutative, trace_radical};
use crate::walg::{
    counital_maps, dual_algebra, is_hopf, tensor_of, FiniteDimAlgebra, WalgError,
    WeakHopfPresentation,
};

/// Default cap on the number of primitive idempotents whose subsets are enumerated.
pub const DEFAULT_MAX_IDEMPOTENTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrouplikeError {
    #[error("not split over the rationals")]
    NotSplit,
    #[error("{found} primitive idempotents exceed the enumeration bound {limit}")]
    TooManyIdempotents { found: usize, limit: usize },
    #[error("invalid idempotent family: {0}")]
    InvalidIdempotents(String),
    #[error("unknown idempotent label `{0}`")]
    UnknownObject(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Walg(#[from] WalgError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `Δ(h) = h⊗h` and `ε(h) = 1`.
pub fn is_grouplike(h: &WeakHopfPresentation, v: &[Scalar]) -> bool {
    h.eps(v).is_one() && h.delta(v) == tensor_of(&[v, v])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrouplikeSet {
    pub labels: Vec<String>,
    /// Sorted lexicographically.
    pub elements: Vec<Vec<Scalar>>,
    /// Whether the enumeration is provably exhaustive.
    pub complete: bool,
}

impl GrouplikeSet {
    pub fn display(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|v| combination(&self.labels, v))
            .collect()
    }
}

/// All rational grouplikes, found as the rational characters of the convolution algebra `H*`.
pub fn enumerate_grouplikes(h: &WeakHopfPresentation) -> Result<GrouplikeSet, GrouplikeError> {
    let dual = dual_algebra(h.coalgebra());
    let (chars, complete) = rational_characters(&dual)?;
    // A character χ of H* is evaluation at the element Σ_k χ(b_k*) b_k of H.
    let mut elements = chars;
    elements.sort();
    for v in &elements {
        if !is_grouplike(h, v) {
            return Err(GrouplikeError::Inconsistent(
                "character did not lift to a grouplike".into(),
            ));
        }
    }
    let m = Matrix::from_rows_with_cols(elements.clone(), h.dim())?;
    if m.rank() != elements.len() {
        return Err(GrouplikeError::Inconsistent(
            "grouplikes are linearly dependent".into(),
        ));
    }
    Ok(GrouplikeSet {
        labels: h.labels().to_vec(),
        elements,
        complete,
    })
}

/// The groupoid of grouplikes: objects are grouplikes in `H_t`, a grouplike `h` is a morphism
/// `ε_s(h) -> ε_t(h)`, composition is the product and inversion is `S`.
pub fn gamma_groupoid(h: &WeakHopfPresentation) -> Result<FiniteGroupoid, GrouplikeError> {
    let set = enumerate_grouplikes(h)?;
    if !set.complete {
        return Err(GrouplikeError::NotSplit);
    }
    let s = h.require_antipode()?;
    let maps = counital_maps(h);
    let elements = &set.elements;
    let find = |v: &[Scalar]| elements.iter().position(|e| e.as_slice() == v);
    let mut objects = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if maps.target.contains(e)? {
            objects.push(i);
        }
    }
    let object_of = |v: &[Scalar]| -> Result<usize, GrouplikeError> {
        let i = find(v).ok_or_else(|| {
            GrouplikeError::Inconsistent("ε_s/ε_t of a grouplike is not grouplike".into())
        })?;
        objects.iter().position(|&o| o == i).ok_or_else(|| {
            GrouplikeError::Inconsistent("ε_s/ε_t of a grouplike is not an object".into())
        })
    };
    let names: Vec<String> = set.display();
    let mut morphisms = Vec::new();
    for e in elements {
        morphisms.push(Morphism {
            label: combination(h.labels(), e),
            source: object_of(&maps.eps_s.apply(e))?,
            target: object_of(&maps.eps_t.apply(e))?,
        });
    }
    let mut comp = BTreeMap::new();
    for a in 0..elements.len() {
        for b in 0..elements.len() {
            if morphisms[a].source != morphisms[b].target {
                continue;
            }
            let ab = h.mul(&elements[a], &elements[b]);
            let k = find(&ab)
                .ok_or_else(|| GrouplikeError::Inconsistent("composition escapes Γ".into()))?;
            comp.insert((a, b), k);
        }
    }
    let inverse = elements
        .iter()
        .map(|e| {
            find(&s.apply(e))
                .ok_or_else(|| GrouplikeError::Inconsistent("S(h) is not grouplike".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let object_names = objects.iter().map(|&i| names[i].clone()).collect();
    Ok(FiniteGroupoid::new(
        object_names,
        morphisms,
        comp,
        inverse,
        objects,
    )?)
}

/// Objects of `Γ(H)` characterized intrinsically: nonzero idempotents `p ∈ H_s ∩ H_t` with
/// `dim(H_min p) = 1`, where `H_min = H_s H_t`.
pub fn gamma_objects_via_idempotents(
    h: &WeakHopfPresentation,
    max_primitive: usize,
) -> Result<Vec<Vec<Scalar>>, GrouplikeError> {
    let alg = h.algebra();
    let maps = counital_maps(h);
    let meet = maps.source.intersection(&maps.target)?;
    let h_min = alg.multiplicative_closure(&alg.product_space(&maps.source, &maps.target));
    let labels = (0..meet.dim()).map(|i| format!("z{i}")).collect();
    let (z, embed) = alg.restrict(&meet, h.unit(), labels)?;
    if !trace_radical(&z).is_zero() {
        return Err(GrouplikeError::Inconsistent(
            "H_s ∩ H_t is not semisimple".into(),
        ));
    }
    let split = split_commutative(&z)?;
    if !split.complete {
        return Err(GrouplikeError::NotSplit);
    }
    let prims: Vec<Vec<Scalar>> = split.idempotents.iter().map(|e| embed.apply(e)).collect();
    if prims.len() > max_primitive {
        return Err(GrouplikeError::TooManyIdempotents {
            found: prims.len(),
            limit: max_primitive,
        });
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << prims.len()) {
        let mut p = vec![Scalar::zero(); h.dim()];
        for (i, e) in prims.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p = crate::exact::add_vec(&p, e);
            }
        }
        let images: Vec<Vec<Scalar>> = h_min.basis().iter().map(|x| alg.mul(x, &p)).collect();
        if Subspace::span(h.dim(), &images)?.dim() == 1 {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// If `dim(H_s ∩ H_t) = 1` then `H` is Hopf or has no grouplike objects; vacuous otherwise.
pub fn check_gamma_dichotomy(h: &WeakHopfPresentation) -> Result<Report, GrouplikeError> {
    let maps = counital_maps(h);
    let meet = maps.source.intersection(&maps.target)?;
    let mut c = Check::new("gamma_dichotomy");
    if meet.dim() != 1 {
        c = c.with_note(&format!("vacuous: dim(H_s ∩ H_t) = {}", meet.dim()));
        return Ok(Report { checks: vec![c] });
    }
    if is_hopf(h)? {
        c.record(true, || Witness::new(["hopf"]));
        return Ok(Report { checks: vec![c] });
    }
    let set = enumerate_grouplikes(h)?;
    let mut objects = Vec::new();
    for e in &set.elements {
        if maps.target.contains(e)? {
            objects.push(e.clone());
        }
    }
    if objects.is_empty() && !set.complete {
        return Err(GrouplikeError::NotSplit);
    }
    c.record(objects.is_empty(), || {
        let mut w = Witness::new(["non-Hopf with grouplike objects"]);
        for o in &objects {
            w = w.value("object", o.clone());
        }
        w
    });
    Ok(Report { checks: vec![c] })
}

/// Checks that a labelled family consists of nonzero, pairwise orthogonal idempotents.
pub fn validate_idempotents(
    a: &FiniteDimAlgebra,
    idems: &[(String, Vec<Scalar>)],
) -> Result<(), GrouplikeError> {
    for (x, e) in idems {
        if e.len() != a.dim() {
            return Err(GrouplikeError::InvalidIdempotents(format!(
                "`{x}` has the wrong length"
            )));
        }
        if is_zero_vec(e) {
            return Err(GrouplikeError::InvalidIdempotents(format!("`{x}` is zero")));
        }
        if a.mul(e, e) != *e {
            return Err(GrouplikeError::InvalidIdempotents(format!(
                "`{x}` is not idempotent"
            )));
        }
    }
    for (i, (x, e)) in idems.iter().enumerate() {
        for (y, f) in &idems[i + 1..] {
            if !is_zero_vec(&a.mul(e, f)) || !is_zero_vec(&a.mul(f, e)) {
                return Err(GrouplikeError::InvalidIdempotents(format!(
                    "`{x}` and `{y}` are not orthogonal"
                )));
            }
        }
    }
    Ok(())
}

fn lookup<'a>(idems: &'a [(String, Vec<Scalar>)], x: &str) -> Result<&'a [Scalar], GrouplikeError> {
    idems
        .iter()
        .find(|(l, _)| l == x)
        .map(|(_, v)| v.as_slice())
        .ok_or_else(|| GrouplikeError::UnknownObject(x.to_string()))
}

/// If `a ∈ e_y A e_x` has an inverse `b ∈ e_x A e_y` with `ab = e_y` and `ba = e_x`, returns it.
/// The conditions are linear in `b`, and the solution is unique when it exists.
pub fn is_local_unit(
    a_alg: &FiniteDimAlgebra,
    idems: &[(String, Vec<Scalar>)],
    a: &[Scalar],
    x: &str,
    y: &str,
) -> Result<Option<Vec<Scalar>>, GrouplikeError> {
    validate_idempotents(a_alg, idems)?;
    let ex = lookup(idems, x)?;
    let ey = lookup(idems, y)?;
    if a.len() != a_alg.dim() {
        return Err(GrouplikeError::Exact(ExactError::DimensionMismatch {
            expected: a_alg.dim(),
            found: a.len(),
        }));
    }
    if is_zero_vec(a) || a_alg.mul(&a_alg.mul(ey, a), ex) != a {
        return Ok(None);
    }
    let n = a_alg.dim();
    let corner = a_alg
        .left_mul_matrix(ex)
        .dot(&a_alg.right_mul_matrix(ey))
        .sub(&Matrix::identity(n))?;
    let system = a_alg
        .left_mul_matrix(a)
        .vstack(&a_alg.right_mul_matrix(a))?
        .vstack(&corner)?;
    let mut rhs = ey.to_vec();
    rhs.extend(ex.iter().cloned());
    rhs.extend(std::iter::repeat(Scalar::zero()).take(n));
    Ok(system.solve(&rhs)?)
}

/// A certified local unit `a: x -> y` with its local inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalUnit {
    pub name: String,
    pub element: Vec<Scalar>,
    pub source: String,
    pub target: String,
    pub inverse: Vec<Scalar>,
}

/// Finitely many certified local units of an algebra with a chosen idempotent family.
#[derive(Clone, Debug)]
pub struct LocalUnitGroupoid {
    pub algebra: FiniteDimAlgebra,
    pub idempotents: Vec<(String, Vec<Scalar>)>,
    pub units: Vec<LocalUnit>,
}

impl LocalUnitGroupoid {
    /// Certifies every candidate `(name, a, x, y)`; returns the groupoid of those that are local
    /// units together with the names of the rejected candidates.
    pub fn certify(
        algebra: FiniteDimAlgebra,
        idempotents: Vec<(String, Vec<Scalar>)>,
        candidates: &[(String, Vec<Scalar>, String, String)],
    ) -> Result<(Self, Vec<String>), GrouplikeError> {
        let mut units = Vec::new();
        let mut rejected = Vec::new();
        for (name, a, x, y) in candidates {
            match is_local_unit(&algebra, &idempotents, a, x, y)? {
                Some(inv) => units.push(LocalUnit {
                    name: name.clone(),
                    element: a.clone(),
                    source: x.clone(),
                    target: y.clone(),
                    inverse: inv,
                }),
                None => rejected.push(name.clone()),
            }
        }
        Ok((
            LocalUnitGroupoid {
                algebra,
                idempotents,
                units,
            },
            rejected,
        ))
    }

    /// The certified units as an abstract finite groupoid on the idempotent labels. Requires the
    /// witness list to contain every identity, inverse and composite it generates.
    pub fn as_groupoid(&self) -> Result<FiniteGroupoid, GrouplikeError> {
        let objects: Vec<String> = self.idempotents.iter().map(|(x, _)| x.clone()).collect();
        let object = |x: &str| {
            objects
                .iter()
                .position(|o| o == x)
                .ok_or_else(|| GrouplikeError::UnknownObject(x.to_string()))
        };
        let find = |v: &[Scalar], what: &str| {
            self.units
                .iter()
                .position(|u| u.element.as_slice() == v)
                .ok_or_else(|| GrouplikeError::Inconsistent(format!("witness list lacks {what}")))
        };
        let morphisms = self
            .units
            .iter()
            .map(|u| {
                Ok(Morphism {
                    label: u.name.clone(),
                    source: object(&u.source)?,
                    target: object(&u.target)?,
                })
            })
            .collect::<Result<Vec<_>, GrouplikeError>>()?;
        let mut comp = BTreeMap::new();
        for (i, a) in self.units.iter().enumerate() {
            for (j, b) in self.units.iter().enumerate() {
                if a.source == b.target {
                    let product = self.algebra.mul(&a.element, &b.element);
                    let what = format!("the composite {}·{}", a.name, b.name);
                    comp.insert((i, j), find(&product, &what)?);
                }
            }
        }
        let inverse = self
            .units
            .iter()
            .map(|u| find(&u.inverse, &format!("the inverse of {}", u.name)))
            .collect::<Result<Vec<_>, _>>()?;
        let identity = self
            .idempotents
            .iter()
            .map(|(x, e)| find(e, &format!("the identity at {x}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroupoid::new(
            objects, morphisms, comp, inverse, identity,
        )?)
    }
}

/// For every composable pair `a₁: x -> y`, `a₂: y -> z`, the product `a₂a₁` is a local unit with
/// inverse `â₁â₂`.
pub fn local_unit_closure_check(g: &LocalUnitGroupoid) -> Result<Report, GrouplikeError> {
    let alg = &g.algebra;
    let labels = alg.labels();
    let mut c = Check::new("local_unit_closure");
    for u1 in &g.units {
        for u2 in g.units.iter().filter(|u| u.source == u1.target) {
            let product = alg.mul(&u2.element, &u1.element);
            let claimed = alg.mul(&u1.inverse, &u2.inverse);
            let certified = is_local_unit(alg, &g.idempotents, &product, &u1.source, &u2.target)?;
            let ok = certified.as_ref() == Some(&claimed);
            c.record(ok, || {
                let residual = match &certified {
                    Some(inv) => sub_vec(inv, &claimed),
                    None => claimed.clone(),
                };
                Witness::new([u1.name.clone(), u2.name.clone()])
                    .residual(labels, &residual)
                    .value("product", product.clone())
            });
        }
    }
    Ok(Report { checks: vec![c] })
}
