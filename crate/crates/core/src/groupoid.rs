//! Finite groupoids, functors between them, and the groupoid algebra `kG`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use thiserror::Error;

use crate::exact::{one, unit_vec, zero_vec, Matrix, Scalar};
use crate::report::{Check, Report, Witness};
use crate::walg::{FiniteDimAlgebra, FiniteDimCoalgebra, WalgError, WeakHopfPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("a groupoid needs at least one object")]
    NoObjects,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("label collision between groupoids: `{0}`")]
    LabelCollision(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("malformed groupoid data: {0}")]
    Shape(String),
    #[error(transparent)]
    Walg(#[from] WalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid given by tables. Composition `gh` ("g after h") is stored only for pairs
/// with `s(g) = t(h)`. Shape is validated on construction; the axioms by [`check_groupoid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    comp: BTreeMap<(usize, usize), usize>,
    inverse: Vec<usize>,
    identity: Vec<usize>,
}

/// Multiplication table of a finite group, used to build connected groupoids.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub labels: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl GroupTable {
    pub fn cyclic(n: usize, generator: &str) -> GroupTable {
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => generator.to_string(),
                _ => format!("{generator}^{k}"),
            })
            .collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupTable {
            labels,
            mul,
            identity: 0,
        }
    }

    /// Symmetric group on three letters, elements as permutations in lexicographic order.
    pub fn symmetric3() -> GroupTable {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let labels = perms
            .iter()
            .map(|p| format!("p{}{}{}", p[0], p[1], p[2]))
            .collect();
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        GroupTable {
            labels,
            mul,
            identity: 0,
        }
    }

    /// Klein four-group `Z/2 × Z/2`.
    pub fn klein4() -> GroupTable {
        let labels = ["1", "a", "b", "ab"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mul = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        GroupTable {
            labels,
            mul,
            identity: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    fn inverse(&self, g: usize) -> usize {
        (0..self.order())
            .find(|&h| self.mul[g][h] == self.identity)
            .expect("group element without inverse")
    }
}

impl FiniteGroupoid {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        comp: BTreeMap<(usize, usize), usize>,
        inverse: Vec<usize>,
        identity: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if objects.is_empty() {
            return Err(GroupoidError::NoObjects);
        }
        let mut seen = BTreeSet::new();
        for o in &objects {
            if !seen.insert(o.clone()) {
                return Err(GroupoidError::DuplicateLabel(o.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for m in &morphisms {
            if !seen.insert(m.label.clone()) {
                return Err(GroupoidError::DuplicateLabel(m.label.clone()));
            }
            if m.source >= objects.len() || m.target >= objects.len() {
                return Err(GroupoidError::Shape(format!(
                    "morphism `{}` has an out-of-range endpoint",
                    m.label
                )));
            }
        }
        let nm = morphisms.len();
        if inverse.len() != nm || inverse.iter().any(|&i| i >= nm) {
            return Err(GroupoidError::Shape(
                "inverse table must map every morphism to a morphism".into(),
            ));
        }
        if identity.len() != objects.len() || identity.iter().any(|&i| i >= nm) {
            return Err(GroupoidError::Shape(
                "identity table must map every object to a morphism".into(),
            ));
        }
        if comp
            .iter()
            .any(|(&(g, h), &k)| g >= nm || h >= nm || k >= nm)
        {
            return Err(GroupoidError::Shape(
                "composition table refers to an unknown morphism".into(),
            ));
        }
        Ok(FiniteGroupoid {
            objects,
            morphisms,
            comp,
            inverse,
            identity,
        })
    }

    /// Builds from labels: morphisms as `(label, source, target)`, identities as
    /// `(object, morphism)`, composition as `(g, h, gh)` and inverses as `(g, g⁻¹)`.
    pub fn from_labels(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        compositions: &[(&str, &str, &str)],
        inverses: &[(&str, &str)],
    ) -> Result<Self, GroupoidError> {
        let obj: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        let mor: BTreeMap<&str, usize> = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0, i))
            .collect();
        let o = |l: &str| {
            obj.get(l)
                .copied()
                .ok_or_else(|| GroupoidError::UnknownLabel(l.to_string()))
        };
        let m = |l: &str| {
            mor.get(l)
                .copied()
                .ok_or_else(|| GroupoidError::UnknownLabel(l.to_string()))
        };
        let ms = morphisms
            .iter()
            .map(|(l, s, t)| {
                Ok(Morphism {
                    label: l.to_string(),
                    source: o(s)?,
                    target: o(t)?,
                })
            })
            .collect::<Result<Vec<_>, GroupoidError>>()?;
        let mut identity = vec![usize::MAX; objects.len()];
        for (x, e) in identities {
            identity[o(x)?] = m(e)?;
        }
        if let Some(i) = identity.iter().position(|&e| e == usize::MAX) {
            return Err(GroupoidError::Shape(format!(
                "object `{}` has no identity",
                objects[i]
            )));
        }
        let mut inverse = vec![usize::MAX; morphisms.len()];
        for (g, h) in inverses {
            inverse[m(g)?] = m(h)?;
        }
        if let Some(i) = inverse.iter().position(|&e| e == usize::MAX) {
            return Err(GroupoidError::Shape(format!(
                "morphism `{}` has no inverse",
                morphisms[i].0
            )));
        }
        let mut comp = BTreeMap::new();
        for (g, h, gh) in compositions {
            comp.insert((m(g)?, m(h)?), m(gh)?);
        }
        FiniteGroupoid::new(
            objects.iter().map(|s| s.to_string()).collect(),
            ms,
            comp,
            inverse,
            identity,
        )
    }

    /// Connected groupoid `objects × group × objects`: a morphism `x -> y` for each group element,
    /// composing by the group law. Identities are labelled `e_<x>`; with a single object the
    /// group's own labels are used.
    pub fn connected(objects: &[String], group: &GroupTable) -> Result<Self, GroupoidError> {
        let k = objects.len();
        let n = group.order();
        let index = |x: usize, y: usize, g: usize| (y * k + x) * n + g;
        let mut morphisms = Vec::with_capacity(k * k * n);
        for y in 0..k {
            for x in 0..k {
                for g in 0..n {
                    let label = if k == 1 {
                        group.labels[g].clone()
                    } else if x == y && g == group.identity {
                        format!("e_{}", objects[x])
                    } else {
                        format!("{}:{}->{}", group.labels[g], objects[x], objects[y])
                    };
                    morphisms.push(Morphism {
                        label,
                        source: x,
                        target: y,
                    });
                }
            }
        }
        let mut comp = BTreeMap::new();
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    for g in 0..n {
                        for h in 0..n {
                            comp.insert(
                                (index(y, z, h), index(x, y, g)),
                                index(x, z, group.mul[h][g]),
                            );
                        }
                    }
                }
            }
        }
        let mut inverse = vec![0; k * k * n];
        for x in 0..k {
            for y in 0..k {
                for g in 0..n {
                    inverse[index(x, y, g)] = index(y, x, group.inverse(g));
                }
            }
        }
        let identity = (0..k).map(|x| index(x, x, group.identity)).collect();
        FiniteGroupoid::new(objects.to_vec(), morphisms, comp, inverse, identity)
    }

    /// One-object groupoid of a group.
    pub fn group(object: &str, group: &GroupTable) -> Result<Self, GroupoidError> {
        FiniteGroupoid::connected(&[object.to_string()], group)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.morphisms[g].source
    }

    pub fn target(&self, g: usize) -> usize {
        self.morphisms[g].target
    }

    pub fn label(&self, g: usize) -> &str {
        &self.morphisms[g].label
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// `gh` when defined.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.comp.get(&(g, h)).copied()
    }

    pub fn compositions(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.comp
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn morphism_index(&self, label: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.label == label)
    }

    /// Positions in the algebra basis: identities first in object order, then the remaining
    /// morphisms in declaration order. Entry `i` is the morphism at basis position `i`.
    pub fn algebra_basis_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.identity.clone();
        let ids: BTreeSet<usize> = self.identity.iter().copied().collect();
        order.extend((0..self.morphisms.len()).filter(|g| !ids.contains(g)));
        order
    }

    /// Inverse of [`FiniteGroupoid::algebra_basis_order`]: morphism index to basis position.
    pub fn basis_position(&self) -> Vec<usize> {
        let order = self.algebra_basis_order();
        let mut pos = vec![0; order.len()];
        for (p, &g) in order.iter().enumerate() {
            pos[g] = p;
        }
        pos
    }
}

/// Exhaustive check of the groupoid axioms.
pub fn check_groupoid(g: &FiniteGroupoid) -> Report {
    let n = g.num_morphisms();
    let lbl = |i: usize| g.label(i).to_string();
    let mut ids = Check::new("identities");
    for (x, name) in g.objects().iter().enumerate() {
        let e = g.identity(x);
        ids.record(g.source(e) == x && g.target(e) == x, || {
            Witness::new([name.clone(), lbl(e)])
        });
    }
    let mut domain = Check::new("composition_domain");
    let mut endpoints = Check::new("composition_endpoints");
    for a in 0..n {
        for b in 0..n {
            let composable = g.source(a) == g.target(b);
            let defined = g.compose(a, b);
            domain.record(composable == defined.is_some(), || {
                Witness::new([lbl(a), lbl(b)])
            });
            if let (true, Some(ab)) = (composable, defined) {
                endpoints.record(
                    g.source(ab) == g.source(b) && g.target(ab) == g.target(a),
                    || Witness::new([lbl(a), lbl(b)]),
                );
            }
        }
    }
    let mut assoc = Check::new("associativity");
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = g.compose(a, b) else { continue };
            for c in 0..n {
                let Some(bc) = g.compose(b, c) else { continue };
                let left = g.compose(ab, c);
                let right = g.compose(a, bc);
                assoc.record(left.is_some() && left == right, || {
                    Witness::new([lbl(a), lbl(b), lbl(c)])
                });
            }
        }
    }
    let mut unit_laws = Check::new("identity_laws");
    for a in 0..n {
        let left = g.compose(g.identity(g.target(a)), a);
        let right = g.compose(a, g.identity(g.source(a)));
        unit_laws.record(left == Some(a) && right == Some(a), || {
            Witness::new([lbl(a)])
        });
    }
    let mut inverses = Check::new("inverses");
    for a in 0..n {
        let b = g.inverse(a);
        let ok = g.compose(a, b) == Some(g.identity(g.target(a)))
            && g.compose(b, a) == Some(g.identity(g.source(a)));
        inverses.record(ok, || Witness::new([lbl(a), lbl(b)]));
    }
    Report {
        checks: vec![ids, domain, endpoints, assoc, unit_laws, inverses],
    }
}

/// A functor between finite groupoids, by object and morphism index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidHom {
    pub source: FiniteGroupoid,
    pub target: FiniteGroupoid,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
    /// When set, objects must map to equally labelled objects.
    pub x_preserving: bool,
}

impl GroupoidHom {
    pub fn new(
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
        x_preserving: bool,
    ) -> Result<Self, GroupoidError> {
        if object_map.len() != source.objects().len()
            || object_map.iter().any(|&x| x >= target.objects().len())
        {
            return Err(GroupoidError::Shape(
                "object map does not match the groupoids".into(),
            ));
        }
        if morphism_map.len() != source.num_morphisms()
            || morphism_map.iter().any(|&g| g >= target.num_morphisms())
        {
            return Err(GroupoidError::Shape(
                "morphism map does not match the groupoids".into(),
            ));
        }
        Ok(GroupoidHom {
            source,
            target,
            object_map,
            morphism_map,
            x_preserving,
        })
    }

    /// Builds from label pairs.
    pub fn from_labels(
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        objects: &[(&str, &str)],
        morphisms: &[(&str, &str)],
        x_preserving: bool,
    ) -> Result<Self, GroupoidError> {
        let mut om = vec![usize::MAX; source.objects().len()];
        for (a, b) in objects {
            let i = source
                .object_index(a)
                .ok_or_else(|| GroupoidError::UnknownLabel(a.to_string()))?;
            om[i] = target
                .object_index(b)
                .ok_or_else(|| GroupoidError::UnknownLabel(b.to_string()))?;
        }
        let mut mm = vec![usize::MAX; source.num_morphisms()];
        for (a, b) in morphisms {
            let i = source
                .morphism_index(a)
                .ok_or_else(|| GroupoidError::UnknownLabel(a.to_string()))?;
            mm[i] = target
                .morphism_index(b)
                .ok_or_else(|| GroupoidError::UnknownLabel(b.to_string()))?;
        }
        GroupoidHom::new(source, target, om, mm, x_preserving)
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidHom {
            source: g.clone(),
            target: g.clone(),
            object_map: (0..g.objects().len()).collect(),
            morphism_map: (0..g.num_morphisms()).collect(),
            x_preserving: true,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupoidHom) -> Result<GroupoidHom, GroupoidError> {
        if self.target != other.source {
            return Err(GroupoidError::Shape("functors are not composable".into()));
        }
        GroupoidHom::new(
            self.source.clone(),
            other.target.clone(),
            self.object_map
                .iter()
                .map(|&x| other.object_map[x])
                .collect(),
            self.morphism_map
                .iter()
                .map(|&g| other.morphism_map[g])
                .collect(),
            self.x_preserving && other.x_preserving,
        )
    }
}

/// Functoriality on all composable pairs, plus the X-preserving condition when flagged.
pub fn check_groupoid_hom(f: &GroupoidHom) -> Report {
    let (src, tgt) = (&f.source, &f.target);
    let lbl = |i: usize| src.label(i).to_string();
    let mut ends = Check::new("sources_targets");
    for g in 0..src.num_morphisms() {
        let fg = f.morphism_map[g];
        ends.record(
            tgt.source(fg) == f.object_map[src.source(g)]
                && tgt.target(fg) == f.object_map[src.target(g)],
            || Witness::new([lbl(g)]),
        );
    }
    let mut comp = Check::new("composition");
    for (&(a, b), &ab) in src.compositions() {
        let image = tgt.compose(f.morphism_map[a], f.morphism_map[b]);
        comp.record(image == Some(f.morphism_map[ab]), || {
            Witness::new([lbl(a), lbl(b)])
        });
    }
    let mut ids = Check::new("identities");
    for x in 0..src.objects().len() {
        ids.record(
            f.morphism_map[src.identity(x)] == tgt.identity(f.object_map[x]),
            || Witness::new([src.objects()[x].clone()]),
        );
    }
    let mut report = Report {
        checks: vec![ends, comp, ids],
    };
    if f.x_preserving {
        let mut xp = Check::new("x_preserving");
        for (x, name) in src.objects().iter().enumerate() {
            xp.record(tgt.objects()[f.object_map[x]] == *name, || {
                Witness::new([name.clone()])
            });
        }
        report.push(xp);
    }
    report
}

/// `kG`: basis = morphisms (identities first), product = composition or zero, `Δ(g) = g⊗g`,
/// `ε(g) = 1`, `S(g) = g⁻¹`, unit `Σ_x e_x`.
pub fn groupoid_algebra(g: &FiniteGroupoid) -> Result<WeakHopfPresentation, GroupoidError> {
    let order = g.algebra_basis_order();
    let pos = g.basis_position();
    let n = order.len();
    let labels: Vec<String> = order.iter().map(|&m| g.label(m).to_string()).collect();
    let mult = g
        .compositions()
        .iter()
        .map(|(&(a, b), &ab)| (pos[a], pos[b], pos[ab], one()));
    let mut unit = zero_vec(n);
    for x in 0..g.objects().len() {
        unit[pos[g.identity(x)]] = one();
    }
    let algebra = FiniteDimAlgebra::new(labels.clone(), mult, unit)?;
    let coalgebra = FiniteDimCoalgebra::new(
        labels,
        (0..n).map(|i| (i, i, i, one())),
        vec![Scalar::one(); n],
    )?;
    let mut s = Matrix::zeros(n, n);
    for m in 0..n {
        s[(pos[g.inverse(m)], pos[m])] = one();
    }
    Ok(WeakHopfPresentation::new(algebra, coalgebra, Some(s))?)
}

/// Matrix of the linear extension `kf: kG -> kG'` in the algebra bases.
pub fn linearize_hom(f: &GroupoidHom) -> Matrix {
    let sp = f.source.basis_position();
    let tp = f.target.basis_position();
    let mut m = Matrix::zeros(f.target.num_morphisms(), f.source.num_morphisms());
    for g in 0..f.source.num_morphisms() {
        m[(tp[f.morphism_map[g]], sp[g])] = one();
    }
    m
}

/// The local identities `e_x` of `kG`, labelled by object.
pub fn groupoid_idempotents(g: &FiniteGroupoid) -> Vec<(String, Vec<Scalar>)> {
    let pos = g.basis_position();
    let n = g.num_morphisms();
    g.objects()
        .iter()
        .enumerate()
        .map(|(x, name)| (name.clone(), unit_vec(n, pos[g.identity(x)])))
        .collect()
}

/// Coproduct of two groupoids with disjoint object and morphism labels.
pub fn disjoint_union(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
) -> Result<FiniteGroupoid, GroupoidError> {
    for o in b.objects() {
        if a.objects().contains(o) {
            return Err(GroupoidError::LabelCollision(o.clone()));
        }
    }
    for m in b.morphisms() {
        if a.morphism_index(&m.label).is_some() {
            return Err(GroupoidError::LabelCollision(m.label.clone()));
        }
    }
    let (ko, km) = (a.objects().len(), a.num_morphisms());
    let mut objects = a.objects().to_vec();
    objects.extend(b.objects().iter().cloned());
    let mut morphisms = a.morphisms().to_vec();
    morphisms.extend(b.morphisms().iter().map(|m| Morphism {
        label: m.label.clone(),
        source: m.source + ko,
        target: m.target + ko,
    }));
    let mut comp = a.compositions().clone();
    comp.extend(
        b.compositions()
            .iter()
            .map(|(&(g, h), &gh)| ((g + km, h + km), gh + km)),
    );
    let mut inverse = a.inverse.clone();
    inverse.extend(b.inverse.iter().map(|&g| g + km));
    let mut identity = a.identity.clone();
    identity.extend(b.identity.iter().map(|&g| g + km));
    FiniteGroupoid::new(objects, morphisms, comp, inverse, identity)
}

/// Structural equality after matching morphisms by label and objects through their identity
/// morphisms. This is the sense in which a reconstructed groupoid "is" the original.
pub fn same_by_morphism_labels(a: &FiniteGroupoid, b: &FiniteGroupoid) -> bool {
    if a.num_morphisms() != b.num_morphisms() || a.objects().len() != b.objects().len() {
        return false;
    }
    let Some(mmap) = (0..a.num_morphisms())
        .map(|g| b.morphism_index(a.label(g)))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let Some(omap) = (0..a.objects().len())
        .map(|x| {
            let e = mmap[a.identity(x)];
            (0..b.objects().len()).find(|&y| b.identity(y) == e)
        })
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    (0..a.num_morphisms()).all(|g| {
        let h = mmap[g];
        b.source(h) == omap[a.source(g)]
            && b.target(h) == omap[a.target(g)]
            && b.inverse(h) == mmap[a.inverse(g)]
    }) && a.compositions().len() == b.compositions().len()
        && a.compositions()
            .iter()
            .all(|(&(g, h), &gh)| b.compose(mmap[g], mmap[h]) == Some(mmap[gh]))
}
