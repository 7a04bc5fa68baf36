mod common;

use common::*;
use proptest::prelude::*;
use whk_core::exact::{int, Matrix, Scalar};
use whk_core::groupoid::{
    check_groupoid, disjoint_union, groupoid_algebra, groupoid_idempotents, linearize_hom, same_by_morphism_labels,
    GroupoidHom,
};
use whk_core::grouplike::{
    check_gamma_dichotomy, enumerate_grouplikes, gamma_groupoid, gamma_objects_via_idempotents, is_grouplike,
    is_local_unit, local_unit_closure_check, GrouplikeError, LocalUnitGroupoid, DEFAULT_MAX_IDEMPOTENTS,
};
use whk_core::walg::{direct_sum, tensor_of, FiniteDimCoalgebra, WeakHopfPresentation};

fn ground_field() -> WeakHopfPresentation {
    groupoid_algebra(&trivial_group("*", "1")).unwrap()
}

fn unit_at(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![int(0); n];
    v[i] = int(1);
    v
}

#[test]
fn grouplike_tests() {
    let g = eq_gg();
    let h = groupoid_algebra(&g).unwrap();
    for i in 0..4 {
        assert!(is_grouplike(&h, &unit_at(4, i)));
    }
    assert!(!is_grouplike(&h, &v(&[1, 1, 0, 0])));
    assert_eq!(h.eps(&v(&[1, 1, 0, 0])), int(2));
    assert!(!is_grouplike(&h, &v(&[0, 0, 0, 0])));
}

#[test]
fn enumeration_examples() {
    let h = groupoid_algebra(&eq_gg()).unwrap();
    let set = enumerate_grouplikes(&h).unwrap();
    assert!(set.complete);
    let mut shown = set.display();
    shown.sort();
    assert_eq!(shown, vec!["e_x", "e_y", "g", "g^-1"]);

    let k = enumerate_grouplikes(&ground_field()).unwrap();
    assert!(k.complete);
    assert_eq!(k.elements, vec![v(&[1])]);

    let z2 = enumerate_grouplikes(&z2_hopf("*", "1", "g")).unwrap();
    assert!(z2.complete);
    assert_eq!(z2.elements.len(), 2);
}

#[test]
fn non_split_coalgebra_is_flagged() {
    // Dual of Q(i): Δ(c) = c⊗c - s⊗s, Δ(s) = c⊗s + s⊗c.
    let coalg = FiniteDimCoalgebra::new(
        vec![s("c"), s("s")],
        [(0, 0, 0, int(1)), (0, 1, 1, int(-1)), (1, 0, 1, int(1)), (1, 1, 0, int(1))],
        v(&[1, 0]),
    )
    .unwrap();
    let h = WeakHopfPresentation::new(gaussian("c", "s"), coalg, None).unwrap();
    let set = enumerate_grouplikes(&h).unwrap();
    assert!(!set.complete);
    assert!(set.elements.is_empty());
    assert!(matches!(gamma_groupoid(&h), Err(GrouplikeError::NotSplit)));
}

#[test]
fn gamma_examples() {
    let g = eq_gg();
    let back = gamma_groupoid(&groupoid_algebra(&g).unwrap()).unwrap();
    assert!(same_by_morphism_labels(&g, &back));

    let k = gamma_groupoid(&ground_field()).unwrap();
    assert_eq!((k.objects().len(), k.num_morphisms()), (1, 1));

    let sum = direct_sum(&[z2_hopf("x", "1x", "ax"), z2_hopf("y", "1y", "ay")]).unwrap();
    let gamma = gamma_groupoid(&sum).unwrap();
    let expected = disjoint_union(&z2("x", "1x", "ax"), &z2("y", "1y", "ay")).unwrap();
    assert!(check_groupoid(&gamma).passed());
    assert!(same_by_morphism_labels(&expected, &gamma));
}

#[test]
fn objects_via_idempotents_examples() {
    let h = groupoid_algebra(&eq_gg()).unwrap();
    let objs = gamma_objects_via_idempotents(&h, DEFAULT_MAX_IDEMPOTENTS).unwrap();
    assert_eq!(objs, vec![v(&[0, 1, 0, 0]), v(&[1, 0, 0, 0])]);
    assert_eq!(gamma_objects_via_idempotents(&ground_field(), 16).unwrap(), vec![v(&[1])]);
    let sum = direct_sum(&[z2_hopf("x", "1x", "ax"), z2_hopf("y", "1y", "ay")]).unwrap();
    let objs = gamma_objects_via_idempotents(&sum, 16).unwrap();
    assert_eq!(objs, vec![v(&[0, 0, 1, 0]), v(&[1, 0, 0, 0])]);
    let big = groupoid_algebra(&assembled_groupoid(&[(0, 2), (1, 1)])).unwrap();
    assert!(matches!(
        gamma_objects_via_idempotents(&big, 2),
        Err(GrouplikeError::TooManyIdempotents { found: 3, limit: 2 })
    ));
}

#[test]
fn dichotomy_examples() {
    let rep = check_gamma_dichotomy(&z2_hopf("*", "1", "g")).unwrap();
    assert!(rep.passed());
    let rep = check_gamma_dichotomy(&groupoid_algebra(&eq_gg()).unwrap()).unwrap();
    assert!(rep.passed());
    assert!(rep.checks[0].note.as_deref().unwrap().contains("vacuous"));
}

#[test]
fn local_units_in_groupoid_algebras() {
    let g = eq_gg();
    let h = groupoid_algebra(&g).unwrap();
    let idems = groupoid_idempotents(&g);
    let pos = g.basis_position();
    let gi = g.morphism_index("g").unwrap();
    let ginv = g.morphism_index("g^-1").unwrap();
    let inv = is_local_unit(h.algebra(), &idems, &unit_at(4, pos[gi]), "x", "y").unwrap();
    assert_eq!(inv, Some(unit_at(4, pos[ginv])));
    assert_eq!(is_local_unit(h.algebra(), &idems, &v(&[0, 0, 0, 0]), "x", "y").unwrap(), None);
    assert_eq!(is_local_unit(h.algebra(), &idems, &unit_at(4, pos[gi]), "y", "x").unwrap(), None);

    let candidates = vec![
        (s("g"), unit_at(4, pos[gi]), s("x"), s("y")),
        (s("g^-1"), unit_at(4, pos[ginv]), s("y"), s("x")),
    ];
    let (lu, rejected) = LocalUnitGroupoid::certify(h.algebra().clone(), idems.clone(), &candidates).unwrap();
    assert!(rejected.is_empty());
    let rep = local_unit_closure_check(&lu).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.checks[0].evaluated, 2);

    let ex = vec![(s("e_x"), idems[0].1.clone(), s("x"), s("x"))];
    let (lu, _) = LocalUnitGroupoid::certify(h.algebra().clone(), idems, &ex).unwrap();
    assert!(local_unit_closure_check(&lu).unwrap().passed());
}

#[test]
fn disjoint_blocks_have_no_cross_units() {
    let a = diagonal(&["a1", "a2", "b1", "b2"]);
    let idems = vec![(s("x"), v(&[1, 1, 0, 0])), (s("y"), v(&[0, 0, 1, 1]))];
    for i in 0..4 {
        assert_eq!(is_local_unit(&a, &idems, &unit_at(4, i), "x", "y").unwrap(), None);
    }
    assert!(is_local_unit(&a, &idems, &v(&[1, 1, 0, 0]), "x", "x").unwrap().is_some());
}

#[test]
fn local_units_of_an_endomorphism_algebra() {
    // End(k² ⊕ k²) with e_x, e_y the block projections.
    let a = matrix_algebra(4);
    let ex = matrix_element(4, &[(1, 1, 1), (2, 2, 1)]);
    let ey = matrix_element(4, &[(3, 3, 1), (4, 4, 1)]);
    let idems = vec![(s("x"), ex.clone()), (s("y"), ey.clone())];
    let f = matrix_element(4, &[(3, 1, 1), (4, 1, 1), (4, 2, 1)]);
    let finv = is_local_unit(&a, &idems, &f, "x", "y").unwrap().expect("invertible cross map");
    assert_eq!(a.mul(&f, &finv), ey);
    assert_eq!(a.mul(&finv, &f), ex);
    let singular = matrix_element(4, &[(3, 1, 1), (4, 1, 1)]);
    assert_eq!(is_local_unit(&a, &idems, &singular, "x", "y").unwrap(), None);
    let candidates = vec![
        (s("f"), f, s("x"), s("y")),
        (s("f^-1"), finv, s("y"), s("x")),
        (s("e_x"), ex, s("x"), s("x")),
        (s("e_y"), ey, s("y"), s("y")),
    ];
    let (lu, rejected) = LocalUnitGroupoid::certify(a, idems, &candidates).unwrap();
    assert!(rejected.is_empty());
    assert!(local_unit_closure_check(&lu).unwrap().passed());
    assert!(check_groupoid(&lu.as_groupoid().unwrap()).passed());
}

#[test]
fn invalid_idempotent_families_are_rejected() {
    let a = diagonal(&["a", "b"]);
    let bad = vec![(s("x"), v(&[1, 1])), (s("y"), v(&[0, 1]))];
    assert!(matches!(
        is_local_unit(&a, &bad, &v(&[1, 0]), "x", "x"),
        Err(GrouplikeError::InvalidIdempotents(_))
    ));
    let good = vec![(s("x"), v(&[1, 0]))];
    assert!(matches!(is_local_unit(&a, &good, &v(&[1, 0]), "x", "z"), Err(GrouplikeError::UnknownObject(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gamma_of_groupoid_algebra_is_the_groupoid(parts in groupoid_parts()) {
        let g = assembled_groupoid(&parts);
        let h = groupoid_algebra(&g).unwrap();
        let set = enumerate_grouplikes(&h).unwrap();
        prop_assert!(set.complete);
        prop_assert_eq!(set.elements.len(), g.num_morphisms());
        let m = Matrix::from_rows_with_cols(set.elements.clone(), h.dim()).unwrap();
        prop_assert_eq!(m.rank(), set.elements.len());
        let gamma = gamma_groupoid(&h).unwrap();
        prop_assert!(same_by_morphism_labels(&g, &gamma));
        let mut objects = gamma_objects_via_idempotents(&h, DEFAULT_MAX_IDEMPOTENTS).unwrap();
        let mut expected: Vec<_> = groupoid_idempotents(&g).into_iter().map(|(_, e)| e).collect();
        objects.sort();
        expected.sort();
        prop_assert_eq!(&objects, &expected);
        for p in &objects {
            prop_assert_eq!(h.delta(p), tensor_of(&[p, p]));
        }
        prop_assert!(check_gamma_dichotomy(&h).unwrap().passed());
    }

    #[test]
    fn x_algebra_maps_preserve_local_units(parts in groupoid_parts(), shift in 0usize..4) {
        let g = assembled_groupoid(&parts);
        let h = groupoid_algebra(&g).unwrap();
        let n = g.num_morphisms();
        let loops: Vec<usize> = (0..g.objects().len())
            .map(|x| {
                let at_x: Vec<usize> = (0..n).filter(|&m| g.source(m) == x && g.target(m) == x).collect();
                at_x[shift % at_x.len()]
            })
            .collect();
        let morphism_map: Vec<usize> = (0..n)
            .map(|m| {
                let a = g.compose(loops[g.target(m)], m).unwrap();
                g.compose(a, g.inverse(loops[g.source(m)])).unwrap()
            })
            .collect();
        let f = GroupoidHom::new(g.clone(), g.clone(), (0..g.objects().len()).collect(), morphism_map, true).unwrap();
        let lin = linearize_hom(&f);
        let idems = groupoid_idempotents(&g);
        let pos = g.basis_position();
        for m in 0..n {
            let (x, y) = (&g.objects()[g.source(m)], &g.objects()[g.target(m)]);
            let a = unit_at(n, pos[m]);
            prop_assert!(is_local_unit(h.algebra(), &idems, &a, x, y).unwrap().is_some());
            prop_assert!(is_local_unit(h.algebra(), &idems, &lin.apply(&a), x, y).unwrap().is_some());
        }
    }
}
