//! The definition-file schema: a JSON object `{"schema": 1, "blocks": [...]}` whose blocks are
//! tagged by `type` and refer to earlier blocks by name.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use whk_core::exact::{format_scalar, parse_scalar, Scalar};

use crate::error::{locate, CliError};

pub const SCHEMA_VERSION: u64 = 1;

/// An exact rational, written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Scalar);

fn integer_value(v: &Value) -> Result<Option<Scalar>, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Some(Scalar::from_integer(i.into())))
            } else if let Some(u) = n.as_u64() {
                Ok(Some(Scalar::from_integer(u.into())))
            } else {
                Err(format!("non-rational scalar `{n}`: use an integer or a \"p/q\" string"))
            }
        }
        _ => Ok(None),
    }
}

pub fn scalar_from_value(v: &Value) -> Result<Scalar, String> {
    if let Some(s) = integer_value(v)? {
        return Ok(s);
    }
    match v {
        Value::String(s) => parse_scalar(s).ok_or_else(|| format!("non-rational scalar `{s}`")),
        other => Err(format!("expected a scalar, found `{other}`")),
    }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    if s.is_integer() {
        if let Ok(i) = i64::try_from(s.numer()) {
            return Value::from(i);
        }
    }
    Value::String(format_scalar(s))
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        scalar_to_value(&self.0).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(de)?;
        scalar_from_value(&v).map(Q).map_err(D::Error::custom)
    }
}

/// A basis reference: position or label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Position(usize),
    Label(String),
}

/// Structure constant `(i, j, k, c)`, written `[i, j, k, num, den]` or `[i, j, k, c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub i: Index,
    pub j: Index,
    pub k: Index,
    pub coefficient: Q,
}

fn index_from_value(v: &Value) -> Result<Index, String> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(|u| Index::Position(u as usize))
            .ok_or_else(|| format!("index `{n}` is not a nonnegative integer")),
        Value::String(s) => Ok(Index::Label(s.clone())),
        other => Err(format!("expected an index, found `{other}`")),
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let c = &self.coefficient.0;
        let (num, den) = match (i64::try_from(c.numer()), i64::try_from(c.denom())) {
            (Ok(n), Ok(d)) => (Value::from(n), Value::from(d)),
            _ => (Value::String(c.numer().to_string()), Value::String(c.denom().to_string())),
        };
        let idx = |i: &Index| serde_json::to_value(i).expect("index serializes");
        vec![idx(&self.i), idx(&self.j), idx(&self.k), num, den].serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let parts = Vec::<Value>::deserialize(de)?;
        let coefficient = match parts.len() {
            4 => scalar_from_value(&parts[3]).map_err(D::Error::custom)?,
            5 => {
                let part = |v: &Value| -> Result<Scalar, String> {
                    let s = scalar_from_value(v)?;
                    if !s.is_integer() {
                        return Err(format!("numerator and denominator must be integers, found `{v}`"));
                    }
                    Ok(s)
                };
                let num = part(&parts[3]).map_err(D::Error::custom)?;
                let den = part(&parts[4]).map_err(D::Error::custom)?;
                if den == Scalar::from_integer(0.into()) {
                    return Err(D::Error::custom("zero denominator in structure constant"));
                }
                num / den
            }
            n => {
                return Err(D::Error::custom(format!(
                    "structure constant needs [i, j, k, num, den] or [i, j, k, c], found {n} entries"
                )))
            }
        };
        let idx = |v: &Value| index_from_value(v).map_err(D::Error::custom);
        Ok(Entry {
            i: idx(&parts[0])?,
            j: idx(&parts[1])?,
            k: idx(&parts[2])?,
            coefficient: Q(coefficient),
        })
    }
}

/// A vector, dense or as `{label: coefficient}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorSpec {
    Dense(Vec<Q>),
    Sparse(BTreeMap<String, Q>),
}

/// Row-major matrix.
pub type MatrixSpec = Vec<Vec<Q>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic,
    Klein4,
    Symmetric3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidBlock {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    /// `[label, source, target]`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<(String, String, String)>,
    /// `[object, identity morphism]`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<(String, String)>,
    /// `[g, h, gh]` for composable pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compositions: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverses: Vec<(String, String)>,
    /// With `objects`: the connected groupoid `objects × group × objects`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    /// Disjoint union of earlier groupoid blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    pub variables: Vec<String>,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalUnitSpec {
    pub name: String,
    pub element: VectorSpec,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraBlock {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<VectorSpec>,
    /// `k^n` with componentwise product on these labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolynomialSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub idempotents: Vec<(String, VectorSpec)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub local_units: Vec<LocalUnitSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakHopfBlock {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid_algebra: Option<String>,
    /// `[object, weakhopf block]`: an object-indexed direct sum.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<VectorSpec>,
    /// `[i, j, k, ...]` means `Δ(b_i) ∋ c b_j ⊗ b_k`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coproducts: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideal_generators: Vec<VectorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XDecompBlock {
    pub name: String,
    /// `[object, algebra block]`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieBlock {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<Entry>,
    /// `gl_n` on the elementary matrices; `labels`, when given, rename them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gl: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebroidBlock {
    pub name: String,
    /// `[object, lie block]`
    pub components: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Groupoid,
    Lie,
}

/// Structure map of one morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Matrix(MatrixSpec),
    /// Linear substitution of variables on polynomial components: column `i` is the image of
    /// the `i`-th variable.
    Substitution { substitution: MatrixSpec },
    /// `E -> M E M⁻¹` on `gl_n` in elementary coordinates.
    GlConjugation { gl_conjugation: MatrixSpec },
    Keyword(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentSpec {
    pub min: i64,
    pub max: i64,
    pub shift: i64,
}

/// Action of one Lie generator on its component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Matrix(MatrixSpec),
    /// `x_i ∂/∂x_j`, 1-based.
    Elementary { elementary: (usize, usize) },
    /// `Σ_i f_i ∂/∂x_i` with each `f_i` a vector in the component.
    VectorField { vector_field: Vec<VectorSpec> },
    LaurentShift { laurent_shift: LaurentSpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionBlock {
    pub name: String,
    #[serde(default = "default_action_kind")]
    pub kind: ActionKind,
    /// An `xdecomp` block or a weakhopf block with components.
    pub carrier: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<String>,
    /// `[morphism, map]`; identity morphisms may be omitted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<(String, MapSpec)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebroid: Option<String>,
    /// `[object, generators of that component in order]`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<(String, Vec<GeneratorSpec>)>,
    /// A groupoid action on the same carrier, for conjugation and envelope checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid_action: Option<String>,
    /// `[morphism, map g_{s(g)} -> g_{t(g)}]`; identity morphisms may be omitted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lie_maps: Vec<(String, MapSpec)>,
}

fn default_action_kind() -> ActionKind {
    ActionKind::Groupoid
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    GroupoidHom,
    XMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBlock {
    pub name: String,
    pub kind: MapKind,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub x_preserving: bool,
    /// For `x_map`: the linear map between weak Hopf algebras.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Block {
    Groupoid(GroupoidBlock),
    Algebra(AlgebraBlock),
    Weakhopf(WeakHopfBlock),
    Xdecomp(XDecompBlock),
    Lie(LieBlock),
    Algebroid(AlgebroidBlock),
    Action(ActionBlock),
    Map(MapBlock),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Groupoid(b) => &b.name,
            Block::Algebra(b) => &b.name,
            Block::Weakhopf(b) => &b.name,
            Block::Xdecomp(b) => &b.name,
            Block::Lie(b) => &b.name,
            Block::Algebroid(b) => &b.name,
            Block::Action(b) => &b.name,
            Block::Map(b) => &b.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Block::Groupoid(_) => "groupoid",
            Block::Algebra(_) => "algebra",
            Block::Weakhopf(_) => "weakhopf",
            Block::Xdecomp(_) => "xdecomp",
            Block::Lie(_) => "lie",
            Block::Algebroid(_) => "algebroid",
            Block::Action(_) => "action",
            Block::Map(_) => "map",
        }
    }

    /// Names of the blocks this one refers to.
    pub fn references(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        match self {
            Block::Groupoid(b) => {
                if let Some(u) = &b.union {
                    out.extend(u.iter().map(String::as_str));
                }
            }
            Block::Algebra(_) | Block::Lie(_) => {}
            Block::Weakhopf(b) => {
                out.extend(b.groupoid_algebra.as_deref());
                out.extend(b.components.iter().map(|(_, c)| c.as_str()));
            }
            Block::Xdecomp(b) => out.extend(b.components.iter().map(|(_, c)| c.as_str())),
            Block::Algebroid(b) => out.extend(b.components.iter().map(|(_, c)| c.as_str())),
            Block::Action(b) => {
                out.push(&b.carrier);
                out.extend(b.groupoid.as_deref());
                out.extend(b.algebroid.as_deref());
                out.extend(b.groupoid_action.as_deref());
            }
            Block::Map(b) => {
                out.push(&b.source);
                out.push(&b.target);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionFile {
    pub schema: u64,
    pub blocks: Vec<Block>,
}

impl DefinitionFile {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name() == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition files serialize")
    }
}

/// Parses and validates names and references: names are unique and every reference points to
/// an earlier block, which makes the reference graph acyclic.
pub fn parse_str(text: &str) -> Result<DefinitionFile, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::NoBlocks);
    }
    let syntax = |e: serde_json::Error| CliError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    };
    let raw: Value = serde_json::from_str(text).map_err(syntax)?;
    if let Some(value) = first_decimal(&raw) {
        let (line, column) = locate(text, &value);
        return Err(CliError::NonRational { value, line, column });
    }
    let file: DefinitionFile = serde_json::from_str(text).map_err(syntax)?;
    if file.schema != SCHEMA_VERSION {
        let (line, column) = locate(text, "\"schema\"");
        return Err(CliError::Schema { found: file.schema, line, column });
    }
    if file.blocks.is_empty() {
        return Err(CliError::NoBlocks);
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (pos, block) in file.blocks.iter().enumerate() {
        for r in block.references() {
            if !seen.contains_key(r) {
                let (line, column) = locate(text, &format!("\"{r}\""));
                let later = file.blocks[pos..].iter().any(|b| b.name() == r);
                return Err(CliError::Dangling {
                    name: r.to_string(),
                    referenced_by: block.name().to_string(),
                    forward: later,
                    line,
                    column,
                });
            }
        }
        if seen.insert(block.name(), pos).is_some() {
            let (line, column) = locate(text, &format!("\"{}\"", block.name()));
            return Err(CliError::DuplicateName { name: block.name().to_string(), line, column });
        }
    }
    Ok(file)
}

/// The first number in the tree that is not an integer, in document order.
fn first_decimal(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => Some(n.to_string()),
        Value::Array(items) => items.iter().find_map(first_decimal),
        Value::Object(map) => map.values().find_map(first_decimal),
        _ => None,
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}
