#![allow(dead_code)]

pub mod oracles;

use whk_core::exact::{int, Matrix, Scalar};
use whk_core::groupoid::{groupoid_algebra, FiniteGroupoid, GroupTable};
use whk_core::module_alg::{Carrier, GroupoidAction, XDecompAlgebra};
use whk_core::smash::DecomposedWeakHopf;
use whk_core::walg::{FiniteDimAlgebra, WeakHopfPresentation};

pub fn s(v: &str) -> String {
    v.to_string()
}

pub fn v(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn m(rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64(rows)
}

/// `x ⇄ y` with identities `e_x`, `e_y` and morphisms `g: x -> y`, `g^-1: y -> x`.
pub fn eq_gg() -> FiniteGroupoid {
    FiniteGroupoid::from_labels(
        &["x", "y"],
        &[("e_x", "x", "x"), ("e_y", "y", "y"), ("g", "x", "y"), ("g^-1", "y", "x")],
        &[("x", "e_x"), ("y", "e_y")],
        &[
            ("e_x", "e_x", "e_x"),
            ("e_y", "e_y", "e_y"),
            ("g", "e_x", "g"),
            ("e_y", "g", "g"),
            ("g^-1", "e_y", "g^-1"),
            ("e_x", "g^-1", "g^-1"),
            ("g^-1", "g", "e_x"),
            ("g", "g^-1", "e_y"),
        ],
        &[("e_x", "e_x"), ("e_y", "e_y"), ("g", "g^-1"), ("g^-1", "g")],
    )
    .unwrap()
}

/// The cyclic group of order two on one object, with the given labels.
pub fn z2(object: &str, one: &str, gen: &str) -> FiniteGroupoid {
    FiniteGroupoid::from_labels(
        &[object],
        &[(one, object, object), (gen, object, object)],
        &[(object, one)],
        &[(one, one, one), (one, gen, gen), (gen, one, gen), (gen, gen, one)],
        &[(one, one), (gen, gen)],
    )
    .unwrap()
}

pub fn trivial_group(object: &str, one: &str) -> FiniteGroupoid {
    FiniteGroupoid::from_labels(&[object], &[(one, object, object)], &[(object, one)], &[(one, one, one)], &[(one, one)])
        .unwrap()
}

pub fn cyclic(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::group("*", &GroupTable::cyclic(n, "g")).unwrap()
}

/// `k^n` with componentwise product on the given labels.
pub fn diagonal(labels: &[&str]) -> FiniteDimAlgebra {
    let n = labels.len();
    FiniteDimAlgebra::new(
        labels.iter().map(|l| l.to_string()).collect(),
        (0..n).map(|i| (i, i, i, int(1))),
        vec![int(1); n],
    )
    .unwrap()
}

/// `Q(i) = Q[t]/(t² + 1)` on the basis `{1, t}`.
pub fn gaussian(one: &str, t: &str) -> FiniteDimAlgebra {
    FiniteDimAlgebra::new(
        vec![s(one), s(t)],
        [(0, 0, 0, int(1)), (0, 1, 1, int(1)), (1, 0, 1, int(1)), (1, 1, 0, int(-1))],
        v(&[1, 0]),
    )
    .unwrap()
}

pub fn zero_algebra() -> FiniteDimAlgebra {
    FiniteDimAlgebra::new(Vec::new(), std::iter::empty(), Vec::new()).unwrap()
}

fn swap2() -> Matrix {
    m(&[&[0, 1], &[1, 0]])
}

/// `k² ⊕ k²` with both `g` and `g^-1` acting by `(a, b) -> (b, a)`.
pub fn swap_action() -> GroupoidAction {
    let alg = XDecompAlgebra::new(vec![s("x"), s("y")], vec![diagonal(&["a1", "a2"]), diagonal(&["b1", "b2"])]).unwrap();
    GroupoidAction::from_labelled(
        eq_gg(),
        Carrier::algebra(alg),
        vec![
            (s("e_x"), Matrix::identity(2)),
            (s("e_y"), Matrix::identity(2)),
            (s("g"), swap2()),
            (s("g^-1"), swap2()),
        ],
    )
    .unwrap()
}

/// `k³ ⊕ k³` with `g` and `g^-1` acting by `(a, b, c) -> (-a, c, b)`.
pub fn sign_flip_action() -> GroupoidAction {
    let alg =
        XDecompAlgebra::new(vec![s("x"), s("y")], vec![diagonal(&["a1", "a2", "a3"]), diagonal(&["b1", "b2", "b3"])])
            .unwrap();
    let w = m(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    GroupoidAction::from_labelled(
        eq_gg(),
        Carrier::algebra(alg),
        vec![
            (s("e_x"), Matrix::identity(3)),
            (s("e_y"), Matrix::identity(3)),
            (s("g"), w.clone()),
            (s("g^-1"), w),
        ],
    )
    .unwrap()
}

/// Two vertex groups of order two; `Q(i)` at vertex 1 with `g1` conjugating, zero at vertex 2.
pub fn vertex_group_action() -> GroupoidAction {
    let g = whk_core::groupoid::disjoint_union(&z2("1", "e1", "g1"), &z2("2", "e2", "g2")).unwrap();
    let alg = XDecompAlgebra::new(vec![s("1"), s("2")], vec![gaussian("u", "t"), zero_algebra()]).unwrap();
    GroupoidAction::from_labelled(
        g,
        Carrier::algebra(alg),
        vec![
            (s("e1"), Matrix::identity(2)),
            (s("g1"), m(&[&[1, 0], &[0, -1]])),
            (s("e2"), Matrix::zeros(0, 0)),
            (s("g2"), Matrix::zeros(0, 0)),
        ],
    )
    .unwrap()
}

/// The same with the second vertex group trivial.
pub fn trivialized_vertex_group_action() -> GroupoidAction {
    let g = whk_core::groupoid::disjoint_union(&z2("1", "e1", "g1"), &trivial_group("2", "e2")).unwrap();
    let alg = XDecompAlgebra::new(vec![s("1"), s("2")], vec![gaussian("u", "t"), zero_algebra()]).unwrap();
    GroupoidAction::from_labelled(
        g,
        Carrier::algebra(alg),
        vec![(s("e1"), Matrix::identity(2)), (s("g1"), m(&[&[1, 0], &[0, -1]])), (s("e2"), Matrix::zeros(0, 0))],
    )
    .unwrap()
}

pub fn z2_hopf(object: &str, one: &str, gen: &str) -> WeakHopfPresentation {
    groupoid_algebra(&z2(object, one, gen)).unwrap()
}

/// `H = k(Z/2) ⊕ k(Z/2)` over objects `x`, `y`.
pub fn block_base() -> DecomposedWeakHopf {
    DecomposedWeakHopf::new(vec![s("x"), s("y")], vec![z2_hopf("x", "1x", "ax"), z2_hopf("y", "1y", "ay")]).unwrap()
}

/// `eq_gg` acting on `block_base` by `g`-structure maps `structure` (and its inverse for `g^-1`).
pub fn block_action(structure: Matrix) -> GroupoidAction {
    let base = block_base();
    let inverse = structure.inverse().unwrap();
    GroupoidAction::from_labelled(
        eq_gg(),
        Carrier::algebra(base.as_xdecomp().unwrap()),
        vec![
            (s("e_x"), Matrix::identity(2)),
            (s("e_y"), Matrix::identity(2)),
            (s("g"), structure),
            (s("g^-1"), inverse),
        ],
    )
    .unwrap()
}

pub fn block_swap_action() -> GroupoidAction {
    block_action(Matrix::identity(2))
}

pub fn block_action_zero() -> GroupoidAction {
    let base = block_base();
    GroupoidAction::from_labelled(
        eq_gg(),
        Carrier::algebra(base.as_xdecomp().unwrap()),
        vec![
            (s("e_x"), Matrix::identity(2)),
            (s("e_y"), Matrix::identity(2)),
            (s("g"), Matrix::zeros(2, 2)),
            (s("g^-1"), Matrix::zeros(2, 2)),
        ],
    )
    .unwrap()
}

/// Disjoint union of connected groupoids; each part is `(group, number of objects)` with groups
/// chosen as 0: trivial, 1: Z/2, 2: Z/3, 3: Klein four, 4: S3.
pub fn assembled_groupoid(parts: &[(usize, usize)]) -> FiniteGroupoid {
    let mut out: Option<FiniteGroupoid> = None;
    let mut next = 0;
    for &(kind, count) in parts {
        let table = match kind % 5 {
            0 => GroupTable::cyclic(1, "g"),
            1 => GroupTable::cyclic(2, "g"),
            2 => GroupTable::cyclic(3, "g"),
            3 => GroupTable::klein4(),
            _ => GroupTable::symmetric3(),
        };
        let objects: Vec<String> = (next..next + count.max(1)).map(|i| format!("o{i}")).collect();
        next += count.max(1);
        let part = FiniteGroupoid::connected(&objects, &table).unwrap();
        let part = if objects.len() == 1 {
            let labels: Vec<String> = part.morphisms().iter().map(|m| format!("{}@{}", m.label, objects[0])).collect();
            relabel(&part, "", &labels)
        } else {
            part
        };
        out = Some(match out {
            None => part,
            Some(acc) => whk_core::groupoid::disjoint_union(&acc, &part).unwrap(),
        });
    }
    out.expect("at least one part")
}

pub fn groupoid_parts() -> impl proptest::strategy::Strategy<Value = Vec<(usize, usize)>> {
    proptest::collection::vec((0usize..5, 1usize..=2), 1..=2)
}

/// Same groupoid with objects prefixed and morphisms renamed positionally.
pub fn relabel(g: &FiniteGroupoid, prefix: &str, labels: &[String]) -> FiniteGroupoid {
    let morphisms: Vec<whk_core::groupoid::Morphism> = g
        .morphisms()
        .iter()
        .zip(labels)
        .map(|(m, l)| whk_core::groupoid::Morphism { label: l.clone(), source: m.source, target: m.target })
        .collect();
    let objects = g.objects().iter().map(|o| format!("{prefix}{o}")).collect();
    FiniteGroupoid::new(
        objects,
        morphisms,
        g.compositions().clone(),
        (0..g.num_morphisms()).map(|m| g.inverse(m)).collect(),
        (0..g.objects().len()).map(|x| g.identity(x)).collect(),
    )
    .unwrap()
}

/// `M_n(k)` on the matrix units `E{i}{j}` (1-based labels).
pub fn matrix_algebra(n: usize) -> FiniteDimAlgebra {
    let idx = |i: usize, j: usize| i * n + j;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                entries.push((idx(i, j), idx(j, k), idx(i, k), int(1)));
            }
        }
    }
    let labels = (0..n * n).map(|p| format!("E{}{}", p / n + 1, p % n + 1)).collect();
    let mut unit = vec![int(0); n * n];
    for i in 0..n {
        unit[idx(i, i)] = int(1);
    }
    FiniteDimAlgebra::new(labels, entries, unit).unwrap()
}

/// Vector in `M_n(k)` with the given `(row, col, value)` entries, 1-based.
pub fn matrix_element(n: usize, entries: &[(usize, usize, i64)]) -> Vec<Scalar> {
    let mut out = vec![int(0); n * n];
    for &(i, j, c) in entries {
        out[(i - 1) * n + (j - 1)] += int(c);
    }
    out
}

/// `algebra` with its unit monomial renamed `1_{object}` so components can be summed.
pub fn tagged_unit(algebra: &FiniteDimAlgebra, object: &str) -> FiniteDimAlgebra {
    let labels = algebra.labels().iter().map(|l| if l == "1" { format!("1_{object}") } else { l.clone() }).collect();
    FiniteDimAlgebra::new(labels, algebra.entries(), algebra.unit().to_vec()).unwrap()
}

/// Polynomial carriers on objects `x` (variables `x1, x2`), `y` (`y1, y2`) and `z` (`z1`),
/// truncated at `degree`. The groupoid is the pair groupoid on `{x, y}` times `{I, M}` with
/// `M = [[1, 1], [0, -1]]` acting by linear substitution, plus `{±1}` at `z`; `gl_2` acts at `x`
/// and `y` by `x_i ∂_j` and `gl_1` at `z` by `z1 ∂_1`.
pub struct PolynomialSetup {
    pub groupoid_action: GroupoidAction,
    pub lie_action: whk_core::lie::LieAction,
    /// Per morphism, the induced map `g_{s(g)} -> g_{t(g)}` in generator coordinates.
    pub lie_maps: Vec<Matrix>,
}

pub fn substitution_matrix() -> Matrix {
    m(&[&[1, 1], &[0, -1]])
}

pub fn polynomial_setup(degree: usize) -> PolynomialSetup {
    use whk_core::lie::{gl_conjugation, FiniteDimLieAlgebra, LieAction, XLieAlgebroid};
    use whk_core::truncation::PolynomialTruncation;
    let px = PolynomialTruncation::new(vec![s("x1"), s("x2")], degree).unwrap();
    let py = PolynomialTruncation::new(vec![s("y1"), s("y2")], degree).unwrap();
    let pz = PolynomialTruncation::new(vec![s("z1")], degree).unwrap();
    let pair = FiniteGroupoid::connected(&[s("x"), s("y")], &GroupTable::cyclic(2, "m")).unwrap();
    let g = whk_core::groupoid::disjoint_union(&pair, &z2("z", "e_z", "s")).unwrap();
    let carrier = XDecompAlgebra::new(
        vec![s("x"), s("y"), s("z")],
        vec![tagged_unit(px.algebra(), "x"), tagged_unit(py.algebra(), "y"), tagged_unit(pz.algebra(), "z")],
    )
    .unwrap();
    let sub = substitution_matrix();
    let z_obj = g.object_index("z").unwrap();
    let mut maps = Vec::new();
    let mut lie_maps = Vec::new();
    for mo in 0..g.num_morphisms() {
        let label = g.label(mo);
        let flips = label.starts_with("m:") || label == "s";
        if g.source(mo) == z_obj {
            let sign = if flips { -1 } else { 1 };
            maps.push(pz.linear_substitution(&m(&[&[sign]])).unwrap());
            lie_maps.push(Matrix::identity(1));
        } else {
            let mat = if flips { sub.clone() } else { Matrix::identity(2) };
            maps.push(px.linear_substitution(&mat).unwrap());
            lie_maps.push(gl_conjugation(&mat).unwrap());
        }
    }
    let groupoid_action = GroupoidAction::new(g, Carrier::algebra(carrier.clone()), maps).unwrap();
    let gl2_fields = |p: &PolynomialTruncation| -> Vec<Matrix> {
        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| p.elementary_field(i, j)).collect()
    };
    let gl_labels = |v: &str| -> Vec<String> {
        (1..=2).flat_map(|i| (1..=2).map(move |j| format!("{v}{i}d{v}{j}"))).collect()
    };
    let algebroid = XLieAlgebroid::new(
        vec![s("x"), s("y"), s("z")],
        vec![
            FiniteDimLieAlgebra::from_matrices(gl_labels("x"), &whk_core::lie::gl_basis(2)).unwrap(),
            FiniteDimLieAlgebra::from_matrices(gl_labels("y"), &whk_core::lie::gl_basis(2)).unwrap(),
            FiniteDimLieAlgebra::abelian(vec![s("z1dz1")]).unwrap(),
        ],
    )
    .unwrap();
    let lie_action =
        LieAction::new(algebroid, carrier, vec![gl2_fields(&px), gl2_fields(&py), vec![pz.elementary_field(0, 0)]])
            .unwrap();
    PolynomialSetup { groupoid_action, lie_action, lie_maps }
}
