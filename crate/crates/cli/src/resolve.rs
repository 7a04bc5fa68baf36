//! Turns validated blocks into library objects, in file order.

use std::collections::BTreeMap;

use num_traits::Zero;
use whk_core::exact::{Matrix, Scalar};
use whk_core::groupoid::{disjoint_union, groupoid_algebra, FiniteGroupoid, GroupTable, GroupoidHom};
use whk_core::lie::{gl_basis, gl_conjugation, FiniteDimLieAlgebra, LieAction, XLieAlgebroid};
use whk_core::module_alg::{Carrier, GroupoidAction, XDecompAlgebra};
use whk_core::smash::DecomposedWeakHopf;
use whk_core::truncation::{laurent_shift, PolynomialTruncation};
use whk_core::walg::{FiniteDimAlgebra, FiniteDimCoalgebra, WeakHopfPresentation};

use crate::error::{locate, CliError};
use crate::format::*;

#[derive(Clone, Debug)]
pub struct AlgebraObject {
    pub algebra: FiniteDimAlgebra,
    pub polynomial: Option<PolynomialTruncation>,
    pub idempotents: Vec<(String, Vec<Scalar>)>,
    /// `(name, element, source, target)`
    pub local_units: Vec<(String, Vec<Scalar>, String, String)>,
}

#[derive(Clone, Debug)]
pub struct WeakHopfObject {
    pub hopf: WeakHopfPresentation,
    pub decomposed: Option<DecomposedWeakHopf>,
    /// The groupoid block this algebra was built from, if any.
    pub groupoid: Option<String>,
    pub ideal_generators: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct XDecompObject {
    pub algebra: XDecompAlgebra,
    pub polynomials: Vec<Option<PolynomialTruncation>>,
}

#[derive(Clone, Debug)]
pub struct GroupoidActionObject {
    pub action: GroupoidAction,
    /// Set when the carrier is a decomposed weak Hopf algebra, enabling smash products.
    pub base: Option<String>,
}

#[derive(Clone, Debug)]
pub struct LieActionObject {
    pub action: LieAction,
    pub groupoid_action: Option<String>,
    pub lie_maps: Option<Vec<Matrix>>,
}

#[derive(Clone, Debug)]
pub enum Resolved {
    Groupoid(FiniteGroupoid),
    Algebra(AlgebraObject),
    WeakHopf(WeakHopfObject),
    XDecomp(XDecompObject),
    Lie(FiniteDimLieAlgebra),
    Algebroid(XLieAlgebroid),
    GroupoidAction(GroupoidActionObject),
    LieAction(LieActionObject),
    GroupoidHom(GroupoidHom),
    XMap { matrix: Matrix, source: String, target: String },
}

/// A parsed file with every block resolved.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub file: DefinitionFile,
    pub objects: BTreeMap<String, Resolved>,
}

impl Workspace {
    pub fn get(&self, name: &str) -> Option<&Resolved> {
        self.objects.get(name)
    }

    pub fn weak_hopf(&self, name: &str) -> Option<&WeakHopfObject> {
        match self.objects.get(name) {
            Some(Resolved::WeakHopf(w)) => Some(w),
            _ => None,
        }
    }

    pub fn groupoid_action(&self, name: &str) -> Option<&GroupoidActionObject> {
        match self.objects.get(name) {
            Some(Resolved::GroupoidAction(a)) => Some(a),
            _ => None,
        }
    }
}

pub fn resolve(file: DefinitionFile, text: &str) -> Result<Workspace, CliError> {
    let mut ws = Workspace { file: file.clone(), objects: BTreeMap::new() };
    for block in &file.blocks {
        let resolved = resolve_block(&ws, block).map_err(|message| {
            let (line, column) = locate(text, &format!("\"{}\"", block.name()));
            CliError::Block { block: block.name().to_string(), message, line, column }
        })?;
        ws.objects.insert(block.name().to_string(), resolved);
    }
    Ok(ws)
}

type R<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn scalars(v: &[Q]) -> Vec<Scalar> {
    v.iter().map(|q| q.0.clone()).collect()
}

fn matrix(spec: &MatrixSpec) -> R<Matrix> {
    let rows: Vec<Vec<Scalar>> = spec.iter().map(|r| scalars(r)).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows_with_cols(rows, cols).map_err(err)
}

fn position(labels: &[String], idx: &Index) -> R<usize> {
    match idx {
        Index::Position(p) if *p < labels.len() => Ok(*p),
        Index::Position(p) => Err(format!("index {p} out of range for dimension {}", labels.len())),
        Index::Label(l) => labels.iter().position(|x| x == l).ok_or_else(|| format!("unknown label `{l}`")),
    }
}

fn entries(labels: &[String], list: &[Entry]) -> R<Vec<(usize, usize, usize, Scalar)>> {
    list.iter()
        .map(|e| {
            Ok((position(labels, &e.i)?, position(labels, &e.j)?, position(labels, &e.k)?, e.coefficient.0.clone()))
        })
        .collect()
}

pub fn vector(labels: &[String], spec: &VectorSpec) -> R<Vec<Scalar>> {
    match spec {
        VectorSpec::Dense(v) => {
            if v.len() != labels.len() {
                return Err(format!("vector has length {} but dimension is {}", v.len(), labels.len()));
            }
            Ok(scalars(v))
        }
        VectorSpec::Sparse(map) => {
            let mut out = vec![Scalar::zero(); labels.len()];
            for (l, c) in map {
                out[position(labels, &Index::Label(l.clone()))?] += &c.0;
            }
            Ok(out)
        }
    }
}

fn group_table(spec: &GroupSpec) -> R<GroupTable> {
    Ok(match spec.kind {
        GroupKind::Cyclic => {
            let order = spec.order.ok_or("cyclic groups need an `order`")?;
            if order == 0 {
                return Err("group order must be positive".into());
            }
            GroupTable::cyclic(order, spec.generator.as_deref().unwrap_or("g"))
        }
        GroupKind::Klein4 => GroupTable::klein4(),
        GroupKind::Symmetric3 => GroupTable::symmetric3(),
    })
}

fn resolve_block(ws: &Workspace, block: &Block) -> R<Resolved> {
    match block {
        Block::Groupoid(b) => groupoid(ws, b).map(Resolved::Groupoid),
        Block::Algebra(b) => algebra(b).map(Resolved::Algebra),
        Block::Weakhopf(b) => weak_hopf(ws, b).map(Resolved::WeakHopf),
        Block::Xdecomp(b) => xdecomp(ws, b).map(Resolved::XDecomp),
        Block::Lie(b) => lie(b).map(Resolved::Lie),
        Block::Algebroid(b) => algebroid(ws, b).map(Resolved::Algebroid),
        Block::Action(b) => match b.kind {
            ActionKind::Groupoid => groupoid_action(ws, b).map(Resolved::GroupoidAction),
            ActionKind::Lie => lie_action(ws, b).map(Resolved::LieAction),
        },
        Block::Map(b) => map(ws, b),
    }
}

fn expect_groupoid<'a>(ws: &'a Workspace, name: &str) -> R<&'a FiniteGroupoid> {
    match ws.get(name) {
        Some(Resolved::Groupoid(g)) => Ok(g),
        _ => Err(format!("`{name}` is not a groupoid block")),
    }
}

fn groupoid(ws: &Workspace, b: &GroupoidBlock) -> R<FiniteGroupoid> {
    if let Some(parts) = &b.union {
        let mut acc: Option<FiniteGroupoid> = None;
        for p in parts {
            let g = expect_groupoid(ws, p)?.clone();
            acc = Some(match acc {
                None => g,
                Some(a) => disjoint_union(&a, &g).map_err(err)?,
            });
        }
        return acc.ok_or_else(|| "an empty union".to_string());
    }
    if let Some(group) = &b.group {
        if b.objects.is_empty() {
            return Err("a group needs at least one object".into());
        }
        return FiniteGroupoid::connected(&b.objects, &group_table(group)?).map_err(err);
    }
    let objects: Vec<&str> = b.objects.iter().map(String::as_str).collect();
    let morphisms: Vec<(&str, &str, &str)> =
        b.morphisms.iter().map(|(l, s, t)| (l.as_str(), s.as_str(), t.as_str())).collect();
    let identities: Vec<(&str, &str)> = b.identities.iter().map(|(x, e)| (x.as_str(), e.as_str())).collect();
    let comps: Vec<(&str, &str, &str)> =
        b.compositions.iter().map(|(g, h, gh)| (g.as_str(), h.as_str(), gh.as_str())).collect();
    let inverses: Vec<(&str, &str)> = b.inverses.iter().map(|(g, i)| (g.as_str(), i.as_str())).collect();
    FiniteGroupoid::from_labels(&objects, &morphisms, &identities, &comps, &inverses).map_err(err)
}

fn algebra(b: &AlgebraBlock) -> R<AlgebraObject> {
    let (algebra, polynomial) = if let Some(p) = &b.polynomial {
        let trunc = PolynomialTruncation::new(p.variables.clone(), p.degree).map_err(err)?;
        let alg = trunc.algebra();
        let alg = match &p.unit_label {
            Some(u) => {
                let labels = alg.labels().iter().map(|l| if l == "1" { u.clone() } else { l.clone() }).collect();
                FiniteDimAlgebra::new(labels, alg.entries(), alg.unit().to_vec()).map_err(err)?
            }
            None => alg.clone(),
        };
        (alg, Some(trunc))
    } else if let Some(d) = &b.diagonal {
        let n = d.len();
        let one = Scalar::from_integer(1.into());
        let alg = FiniteDimAlgebra::new(d.clone(), (0..n).map(|i| (i, i, i, one.clone())), vec![one.clone(); n])
            .map_err(err)?;
        (alg, None)
    } else {
        let unit = vector(&b.labels, b.unit.as_ref().ok_or("an explicit algebra needs a `unit`")?)?;
        let alg = FiniteDimAlgebra::new(b.labels.clone(), entries(&b.labels, &b.products)?, unit).map_err(err)?;
        (alg, None)
    };
    let labels = algebra.labels().to_vec();
    let idempotents = b
        .idempotents
        .iter()
        .map(|(x, v)| Ok((x.clone(), vector(&labels, v)?)))
        .collect::<R<Vec<_>>>()?;
    let local_units = b
        .local_units
        .iter()
        .map(|u| Ok((u.name.clone(), vector(&labels, &u.element)?, u.source.clone(), u.target.clone())))
        .collect::<R<Vec<_>>>()?;
    Ok(AlgebraObject { algebra, polynomial, idempotents, local_units })
}

fn weak_hopf(ws: &Workspace, b: &WeakHopfBlock) -> R<WeakHopfObject> {
    let (hopf, decomposed, groupoid_name) = if let Some(g) = &b.groupoid_algebra {
        (groupoid_algebra(expect_groupoid(ws, g)?).map_err(err)?, None, Some(g.clone()))
    } else if !b.components.is_empty() {
        let mut objects = Vec::new();
        let mut comps = Vec::new();
        for (x, c) in &b.components {
            let w = ws.weak_hopf(c).ok_or_else(|| format!("`{c}` is not a weakhopf block"))?;
            objects.push(x.clone());
            comps.push(w.hopf.clone());
        }
        let d = DecomposedWeakHopf::new(objects, comps).map_err(err)?;
        (d.total().clone(), Some(d), None)
    } else {
        let labels = &b.labels;
        let unit = vector(labels, b.unit.as_ref().ok_or("an explicit weak Hopf algebra needs a `unit`")?)?;
        let counit = vector(labels, b.counit.as_ref().ok_or("an explicit weak Hopf algebra needs a `counit`")?)?;
        let alg = FiniteDimAlgebra::new(labels.clone(), entries(labels, &b.products)?, unit).map_err(err)?;
        let coalg = FiniteDimCoalgebra::new(labels.clone(), entries(labels, &b.coproducts)?, counit).map_err(err)?;
        let antipode = b.antipode.as_ref().map(matrix).transpose()?;
        (WeakHopfPresentation::new(alg, coalg, antipode).map_err(err)?, None, None)
    };
    let ideal_generators =
        b.ideal_generators.iter().map(|v| vector(hopf.labels(), v)).collect::<R<Vec<_>>>()?;
    Ok(WeakHopfObject { hopf, decomposed, groupoid: groupoid_name, ideal_generators })
}

fn xdecomp(ws: &Workspace, b: &XDecompBlock) -> R<XDecompObject> {
    let mut objects = Vec::new();
    let mut comps = Vec::new();
    let mut polys = Vec::new();
    for (x, c) in &b.components {
        match ws.get(c) {
            Some(Resolved::Algebra(a)) => {
                objects.push(x.clone());
                comps.push(a.algebra.clone());
                polys.push(a.polynomial.clone());
            }
            _ => return Err(format!("`{c}` is not an algebra block")),
        }
    }
    Ok(XDecompObject { algebra: XDecompAlgebra::new(objects, comps).map_err(err)?, polynomials: polys })
}

fn lie(b: &LieBlock) -> R<FiniteDimLieAlgebra> {
    if let Some(n) = b.gl {
        let base = FiniteDimLieAlgebra::gl(n);
        if b.labels.is_empty() {
            return Ok(base);
        }
        if b.labels.len() != n * n {
            return Err(format!("gl_{n} needs {} labels", n * n));
        }
        return FiniteDimLieAlgebra::from_matrices(b.labels.clone(), &gl_basis(n)).map_err(err);
    }
    if b.abelian {
        return FiniteDimLieAlgebra::abelian(b.labels.clone()).map_err(err);
    }
    FiniteDimLieAlgebra::new(b.labels.clone(), entries(&b.labels, &b.brackets)?).map_err(err)
}

fn algebroid(ws: &Workspace, b: &AlgebroidBlock) -> R<XLieAlgebroid> {
    let mut objects = Vec::new();
    let mut comps = Vec::new();
    for (x, c) in &b.components {
        match ws.get(c) {
            Some(Resolved::Lie(l)) => {
                objects.push(x.clone());
                comps.push(l.clone());
            }
            _ => return Err(format!("`{c}` is not a lie block")),
        }
    }
    XLieAlgebroid::new(objects, comps).map_err(err)
}

/// The carrier of an action: an xdecomp block, or a weakhopf block with components.
fn carrier(ws: &Workspace, name: &str) -> R<(XDecompObject, Option<String>)> {
    match ws.get(name) {
        Some(Resolved::XDecomp(x)) => Ok((x.clone(), None)),
        Some(Resolved::WeakHopf(WeakHopfObject { decomposed: Some(d), .. })) => {
            let alg = d.as_xdecomp().map_err(err)?;
            let n = alg.objects().len();
            Ok((XDecompObject { algebra: alg, polynomials: vec![None; n] }, Some(name.to_string())))
        }
        _ => Err(format!("`{name}` is neither an xdecomp block nor a weakhopf block with components")),
    }
}

fn morphism_maps(
    g: &FiniteGroupoid,
    specs: &[(String, MapSpec)],
    what: &str,
    build: impl Fn(usize, &MapSpec) -> R<Matrix>,
    identity_of: impl Fn(usize) -> Matrix,
) -> R<Vec<Matrix>> {
    let mut out: Vec<Option<Matrix>> = vec![None; g.num_morphisms()];
    for (label, spec) in specs {
        let m = g.morphism_index(label).ok_or_else(|| format!("unknown morphism `{label}` in {what}"))?;
        if out[m].is_some() {
            return Err(format!("morphism `{label}` is given twice in {what}"));
        }
        out[m] = Some(build(m, spec)?);
    }
    let identities: Vec<usize> = (0..g.objects().len()).map(|x| g.identity(x)).collect();
    out.into_iter()
        .enumerate()
        .map(|(m, v)| match v {
            Some(v) => Ok(v),
            None if identities.contains(&m) => Ok(identity_of(m)),
            None => Err(format!("{what} lack morphism `{}`", g.label(m))),
        })
        .collect()
}

fn groupoid_action(ws: &Workspace, b: &ActionBlock) -> R<GroupoidActionObject> {
    let g = expect_groupoid(ws, b.groupoid.as_deref().ok_or("a groupoid action needs a `groupoid`")?)?;
    let (carrier_obj, base) = carrier(ws, &b.carrier)?;
    let alg = &carrier_obj.algebra;
    if alg.objects() != g.objects() {
        return Err(format!(
            "carrier objects {:?} differ from groupoid objects {:?}",
            alg.objects(),
            g.objects()
        ));
    }
    let maps = morphism_maps(
        g,
        &b.maps,
        "structure maps",
        |m, spec| {
            let (s, t) = (g.source(m), g.target(m));
            match spec {
                MapSpec::Matrix(rows) => matrix(rows),
                MapSpec::Substitution { substitution } => {
                    let (ps, pt) = match (&carrier_obj.polynomials[s], &carrier_obj.polynomials[t]) {
                        (Some(a), Some(b)) => (a, b),
                        _ => return Err(format!("substitution for `{}` needs polynomial components", g.label(m))),
                    };
                    if ps.variables().len() != pt.variables().len() || ps.degree() != pt.degree() {
                        return Err(format!("`{}` joins polynomial components of different shape", g.label(m)));
                    }
                    ps.linear_substitution(&matrix(substitution)?).map_err(err)
                }
                MapSpec::Keyword(k) if k == "identity" => {
                    if alg.component(s).dim() != alg.component(t).dim() {
                        return Err(format!("`identity` for `{}` joins components of different dimension", g.label(m)));
                    }
                    Ok(Matrix::identity(alg.component(s).dim()))
                }
                other => Err(format!("unsupported structure map for `{}`: {other:?}", g.label(m))),
            }
        },
        |m| Matrix::identity(alg.component(g.source(m)).dim()),
    )?;
    let action = GroupoidAction::new(g.clone(), Carrier::algebra(alg.clone()), maps).map_err(err)?;
    Ok(GroupoidActionObject { action, base })
}

fn lie_action(ws: &Workspace, b: &ActionBlock) -> R<LieActionObject> {
    let algebroid = match ws.get(b.algebroid.as_deref().ok_or("a Lie action needs an `algebroid`")?) {
        Some(Resolved::Algebroid(a)) => a.clone(),
        _ => return Err("`algebroid` must name an algebroid block".into()),
    };
    let (carrier_obj, _) = carrier(ws, &b.carrier)?;
    let alg = &carrier_obj.algebra;
    let mut matrices: Vec<Option<Vec<Matrix>>> = vec![None; alg.objects().len()];
    for (x, gens) in &b.generators {
        let xi = alg.object_index(x).ok_or_else(|| format!("unknown object `{x}` in generators"))?;
        let lie_labels = algebroid.component(xi).labels().to_vec();
        let comp = alg.component(xi);
        let mut ms = Vec::new();
        for (p, spec) in gens.iter().enumerate() {
            let gen_name = lie_labels.get(p).cloned().unwrap_or_else(|| format!("{x}#{p}"));
            let poly = carrier_obj.polynomials[xi].as_ref();
            let m = match spec {
                GeneratorSpec::Matrix(rows) => matrix(rows)?,
                GeneratorSpec::Elementary { elementary: (i, j) } => {
                    let poly = poly.ok_or_else(|| format!("`{gen_name}` needs a polynomial component"))?;
                    let n = poly.variables().len();
                    if *i == 0 || *j == 0 || *i > n || *j > n {
                        return Err(format!("`{gen_name}`: variable index out of range 1..={n}"));
                    }
                    poly.elementary_field(i - 1, j - 1)
                }
                GeneratorSpec::VectorField { vector_field } => {
                    let poly = poly.ok_or_else(|| format!("`{gen_name}` needs a polynomial component"))?;
                    let coeffs =
                        vector_field.iter().map(|v| vector(comp.labels(), v)).collect::<R<Vec<_>>>()?;
                    poly.vector_field(&gen_name, &coeffs).map_err(err)?
                }
                GeneratorSpec::LaurentShift { laurent_shift: l } => {
                    let m = laurent_shift(l.min, l.max, l.shift, &gen_name).map_err(err)?;
                    if m.rows() != comp.dim() {
                        return Err(format!("`{gen_name}`: Laurent window does not match the component"));
                    }
                    m
                }
            };
            ms.push(m);
        }
        matrices[xi] = Some(ms);
    }
    let matrices = matrices.into_iter().map(|m| m.unwrap_or_default()).collect();
    let action = LieAction::new(algebroid.clone(), alg.clone(), matrices).map_err(err)?;
    let lie_maps = match (&b.groupoid_action, b.lie_maps.is_empty()) {
        (Some(name), false) => {
            let ga = ws.groupoid_action(name).ok_or_else(|| format!("`{name}` is not a groupoid action"))?;
            let g = ga.action.groupoid();
            Some(morphism_maps(
                g,
                &b.lie_maps,
                "Lie maps",
                |_, spec| match spec {
                    MapSpec::Matrix(rows) => matrix(rows),
                    MapSpec::GlConjugation { gl_conjugation: m } => gl_conjugation(&matrix(m)?).map_err(err),
                    MapSpec::Keyword(k) if k == "identity" => Err("use explicit Lie maps".into()),
                    other => Err(format!("unsupported Lie map {other:?}")),
                },
                |m| Matrix::identity(algebroid.component(g.source(m)).dim()),
            )?)
        }
        (None, false) => return Err("`lie_maps` need a `groupoid_action`".into()),
        _ => None,
    };
    if let Some(name) = &b.groupoid_action {
        if ws.groupoid_action(name).is_none() {
            return Err(format!("`{name}` is not a groupoid action"));
        }
    }
    Ok(LieActionObject { action, groupoid_action: b.groupoid_action.clone(), lie_maps })
}

fn map(ws: &Workspace, b: &MapBlock) -> R<Resolved> {
    match b.kind {
        MapKind::GroupoidHom => {
            let src = expect_groupoid(ws, &b.source)?.clone();
            let tgt = expect_groupoid(ws, &b.target)?.clone();
            let objects: Vec<(&str, &str)> = b.objects.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
            let morphisms: Vec<(&str, &str)> = b.morphisms.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
            GroupoidHom::from_labels(src, tgt, &objects, &morphisms, b.x_preserving)
                .map(Resolved::GroupoidHom)
                .map_err(err)
        }
        MapKind::XMap => {
            for side in [&b.source, &b.target] {
                if ws.weak_hopf(side).is_none() {
                    return Err(format!("`{side}` is not a weakhopf block"));
                }
            }
            let m = matrix(b.matrix.as_ref().ok_or("an x_map needs a `matrix`")?)?;
            Ok(Resolved::XMap { matrix: m, source: b.source.clone(), target: b.target.clone() })
        }
    }
}
