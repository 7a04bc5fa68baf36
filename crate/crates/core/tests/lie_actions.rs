mod common;

use common::oracles::dense_derivation_dim;
use common::*;
use proptest::prelude::*;
use whk_core::exact::{int, rat, Matrix, Scalar};
use whk_core::lie::{
    bounded_envelope_consistency, check_algebroid_action, check_bracket_closure, check_lie, check_lie_module_algebra,
    conjugate_action, der_x, derivation_space, gl_conjugation, FiniteDimLieAlgebra, LieAction, LieError, XLieAlgebroid,
};
use whk_core::module_alg::{check_groupoid_module, check_groupoid_module_algebra, XDecompAlgebra};
use whk_core::truncation::{laurent_shift, PolynomialTruncation, TruncationError};
use whk_core::walg::FiniteDimAlgebra;

/// `k[x]/(x^n)` on `1, x, ..., x^{n-1}`.
fn nilpotent_truncation(n: usize) -> FiniteDimAlgebra {
    PolynomialTruncation::new(vec![s("x")], n - 1).unwrap().algebra().clone()
}

#[test]
fn lie_algebra_examples() {
    assert!(check_lie(&FiniteDimLieAlgebra::gl(2)).passed());
    assert!(check_lie(&FiniteDimLieAlgebra::abelian(vec![s("p"), s("q")]).unwrap()).passed());
    assert_eq!(FiniteDimLieAlgebra::gl(3).dim(), 9);
    let bad = FiniteDimLieAlgebra::new(vec![s("p"), s("q")], [(0, 1, 0, int(1)), (1, 0, 0, int(1))]).unwrap();
    let rep = check_lie(&bad);
    assert!(!rep.check_passed("antisymmetry"));
    assert_eq!(rep.check("antisymmetry").unwrap().failures.iter().next().unwrap().tuple, vec![s("p"), s("q")]);
}

#[test]
fn jacobi_failure_is_reported() {
    // [p, q] = p, [p, r] = q, [q, r] = 0 is antisymmetric; the Jacobi sum on (p, q, r) is -q.
    let l = FiniteDimLieAlgebra::new(
        vec![s("p"), s("q"), s("r")],
        [(0, 1, 0, int(1)), (1, 0, 0, int(-1)), (0, 2, 1, int(1)), (2, 0, 1, int(-1))],
    )
    .unwrap();
    let rep = check_lie(&l);
    assert!(rep.check_passed("antisymmetry"));
    assert!(!rep.check_passed("jacobi"));
}

#[test]
fn from_matrices_rejects_dependent_and_unclosed_families() {
    let e12 = m(&[&[0, 1], &[0, 0]]);
    let e21 = m(&[&[0, 0], &[1, 0]]);
    assert_eq!(FiniteDimLieAlgebra::from_matrices(vec![s("a"), s("b")], &[e12.clone(), e12.clone()]), Err(LieError::Dependent));
    assert_eq!(FiniteDimLieAlgebra::from_matrices(vec![s("a"), s("b")], &[e12, e21]), Err(LieError::NotClosed));
}

#[test]
fn derivation_dimensions() {
    for n in 2..=5 {
        let a = nilpotent_truncation(n);
        assert_eq!(derivation_space(&a).dim(), n - 1, "k[x]/(x^{n})");
        assert_eq!(dense_derivation_dim(&a), n - 1);
    }
    assert_eq!(derivation_space(&diagonal(&["1"])).dim(), 0);
    assert_eq!(derivation_space(&diagonal(&["p", "q"])).dim(), 0);
    assert_eq!(dense_derivation_dim(&diagonal(&["p", "q"])), 0);
    let xy = PolynomialTruncation::new(vec![s("x"), s("y")], 2).unwrap();
    let d = derivation_space(xy.algebra()).dim();
    assert_eq!(d, dense_derivation_dim(xy.algebra()));
    // D(x), D(y) have no constant term and otherwise any linear or quadratic part: 2·5.
    assert_eq!(d, 10);
    assert!(check_bracket_closure(xy.algebra(), &derivation_space(xy.algebra())).passed());
    assert_eq!(derivation_space(&gaussian("1", "i")).dim(), 0);
    assert_eq!(derivation_space(&matrix_algebra(2)).dim(), dense_derivation_dim(&matrix_algebra(2)));
    assert_eq!(derivation_space(&matrix_algebra(2)).dim(), 3);
}

#[test]
fn der_x_acts_by_derivations() {
    let carrier = XDecompAlgebra::new(
        vec![s("x"), s("y")],
        vec![nilpotent_truncation(3), tagged_unit(&nilpotent_truncation(2), "y")]
            .into_iter()
            .enumerate()
            .map(|(i, a)| relabel_algebra(&a, if i == 0 { "x" } else { "y" }))
            .collect(),
    )
    .unwrap();
    let act = der_x(&carrier).unwrap();
    assert_eq!(act.algebroid().component(0).dim(), 2);
    assert_eq!(act.algebroid().component(1).dim(), 1);
    let rep = check_algebroid_action(&act).unwrap();
    assert!(rep.passed(), "{:?}", rep.failed_checks());
    assert!(whk_core::lie::check_algebroid(act.algebroid()).passed());
}

fn relabel_algebra(a: &FiniteDimAlgebra, tag: &str) -> FiniteDimAlgebra {
    let labels = a.labels().iter().map(|l| format!("{l}@{tag}")).collect();
    FiniteDimAlgebra::new(labels, a.entries(), a.unit().to_vec()).unwrap()
}

#[test]
fn identity_action_fails_unit_and_leibniz() {
    let a = nilpotent_truncation(3);
    let l = FiniteDimLieAlgebra::abelian(vec![s("p")]).unwrap();
    let rep = check_lie_module_algebra(&l, &a, &[Matrix::identity(3)]).unwrap();
    assert!(!rep.check_passed("unit"));
    assert!(!rep.check_passed("leibniz"));
    assert!(rep.check_passed("lie_homomorphism"));
}

#[test]
fn gl2_acts_on_the_truncated_plane() {
    for degree in 0..=3 {
        let p = PolynomialTruncation::new(vec![s("x1"), s("x2")], degree).unwrap();
        let fields: Vec<Matrix> = (0..4).map(|k| p.elementary_field(k / 2, k % 2)).collect();
        let rep = check_lie_module_algebra(&FiniteDimLieAlgebra::gl(2), p.algebra(), &fields).unwrap();
        assert!(rep.passed(), "degree {degree}: {:?}", rep.failed_checks());
    }
}

#[test]
fn cross_component_generators_are_rejected() {
    let carrier = XDecompAlgebra::new(vec![s("x"), s("y")], vec![diagonal(&["a"]), diagonal(&["b"])]).unwrap();
    let algebroid = XLieAlgebroid::new(
        vec![s("x"), s("y")],
        vec![FiniteDimLieAlgebra::abelian(vec![s("p")]).unwrap(), FiniteDimLieAlgebra::zero()],
    )
    .unwrap();
    let leaking = m(&[&[0, 0], &[1, 0]]);
    let err = LieAction::from_total(algebroid.clone(), carrier.clone(), vec![vec![leaking], vec![]]).unwrap_err();
    assert_eq!(err, LieError::CrossComponent { generator: s("p"), component: s("x") });
    assert!(LieAction::from_total(algebroid, carrier, vec![vec![Matrix::zeros(2, 2)], vec![]]).is_ok());
}

#[test]
fn rescaling_fixes_the_euler_field() {
    let p = PolynomialTruncation::new(vec![s("x")], 3).unwrap();
    let nu = p.linear_substitution(&m(&[&[2]])).unwrap();
    let euler = p.elementary_field(0, 0);
    let conj = nu.dot(&euler).dot(&nu.inverse().unwrap());
    assert_eq!(conj, euler);
    assert_eq!(gl_conjugation(&m(&[&[2]])).unwrap(), Matrix::identity(1));
}

#[test]
fn polynomial_setup_is_a_module_algebra() {
    let setup = polynomial_setup(3);
    assert!(check_groupoid_module(&setup.groupoid_action).passed());
    let rep = check_groupoid_module_algebra(&setup.groupoid_action).unwrap();
    assert!(rep.passed(), "{:?}", rep.failed_checks());
    let rep = check_algebroid_action(&setup.lie_action).unwrap();
    assert!(rep.passed(), "{:?}", rep.failed_checks());
}

#[test]
fn polynomial_setup_conjugation_is_equivariant() {
    let setup = polynomial_setup(3);
    let conj = conjugate_action(&setup.groupoid_action, &setup.lie_action, Some(&setup.lie_maps)).unwrap();
    assert!(conj.report.passed(), "{:?}", conj.report.failed_checks());
    let none = conjugate_action(&setup.groupoid_action, &setup.lie_action, None).unwrap();
    assert_eq!(none.report.checks.len(), 1);
}

#[test]
fn wrong_lie_maps_break_equivariance() {
    let setup = polynomial_setup(2);
    let mut maps = setup.lie_maps.clone();
    for (k, mo) in maps.iter_mut().enumerate() {
        if setup.groupoid_action.groupoid().label(k).starts_with("m:") {
            *mo = Matrix::identity(4);
        }
    }
    let conj = conjugate_action(&setup.groupoid_action, &setup.lie_action, Some(&maps)).unwrap();
    assert!(conj.report.check_passed("derivation_membership"));
    assert!(!conj.report.check_passed("equivariance"));
}

#[test]
fn polynomial_setup_envelope_consistency() {
    let setup = polynomial_setup(3);
    let rep = bounded_envelope_consistency(&setup.lie_action, &setup.groupoid_action, 2).unwrap();
    assert!(rep.passed(), "{:?}", rep.failed_checks());
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        vec!["multiplicativity/k0", "unitality/k0", "multiplicativity/k1", "unitality/k1", "multiplicativity/k2", "unitality/k2"]
    );
}

#[test]
fn envelope_results_form_a_prefix() {
    // Checks for a bound d are the first checks for any larger bound.
    let setup = polynomial_setup(2);
    let short = bounded_envelope_consistency(&setup.lie_action, &setup.groupoid_action, 1).unwrap();
    let long = bounded_envelope_consistency(&setup.lie_action, &setup.groupoid_action, 2).unwrap();
    assert_eq!(short.checks, long.checks[..short.checks.len()].to_vec());
}

#[test]
fn non_derivation_fails_at_word_length_one() {
    let carrier = XDecompAlgebra::new(vec![s("x")], vec![nilpotent_truncation(3)]).unwrap();
    let algebroid =
        XLieAlgebroid::new(vec![s("x")], vec![FiniteDimLieAlgebra::abelian(vec![s("p")]).unwrap()]).unwrap();
    let lie = LieAction::new(algebroid, carrier.clone(), vec![vec![Matrix::identity(3)]]).unwrap();
    let grp = whk_core::module_alg::GroupoidAction::identity(
        trivial_group("x", "e"),
        whk_core::module_alg::Carrier::algebra(carrier),
    )
    .unwrap();
    let rep = bounded_envelope_consistency(&lie, &grp, 2).unwrap();
    assert!(rep.check_passed("multiplicativity/k0"));
    assert!(rep.check_passed("unitality/k0"));
    assert!(!rep.check_passed("multiplicativity/k1"));
    assert!(!rep.check_passed("unitality/k1"));
}

#[test]
fn truncation_commutes_with_projection() {
    let high = PolynomialTruncation::new(vec![s("x1"), s("x2")], 3).unwrap();
    let low = PolynomialTruncation::new(vec![s("x1"), s("x2")], 2).unwrap();
    let p = high.projection_to(&low).unwrap();
    let sub = substitution_matrix();
    assert_eq!(p.dot(&high.linear_substitution(&sub).unwrap()), low.linear_substitution(&sub).unwrap().dot(&p));
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        assert_eq!(p.dot(&high.elementary_field(i, j)), low.elementary_field(i, j).dot(&p));
    }
    assert!(low.projection_to(&high).is_err());
}

#[test]
fn laurent_shifts_are_rejected() {
    assert_eq!(laurent_shift(-2, 2, 0, "id").unwrap(), Matrix::identity(5));
    match laurent_shift(-2, 2, 1, "t") {
        Err(TruncationError::NotPreserved { generator, detail }) => {
            assert_eq!(generator, "t");
            assert!(detail.contains("t^2"));
        }
        other => panic!("expected rejection, got {other:?}"),
    }
    assert!(laurent_shift(3, 1, 0, "t").is_err());
}

#[test]
fn nonlinear_vector_fields_are_not_grade_preserving() {
    let p = PolynomialTruncation::new(vec![s("x")], 3).unwrap();
    let one = p.algebra().unit().to_vec();
    assert!(matches!(p.vector_field("d", &[one]), Err(TruncationError::NotGradePreserving { .. })));
}

fn small_entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivation_space_matches_dense_oracle(n in 1usize..=4, tag in 0usize..3) {
        let a = match tag {
            0 => nilpotent_truncation(n + 1),
            1 => matrix_algebra(n.min(2)),
            _ => diagonal(&["a", "b", "c", "d"][..n]),
        };
        prop_assert_eq!(derivation_space(&a).dim(), dense_derivation_dim(&a));
    }

    #[test]
    fn leibniz_implies_unit_kill(entries in small_entries(), combo in prop::collection::vec(-3i64..=3, 2), use_combo in any::<bool>()) {
        let a = nilpotent_truncation(3);
        let tau = if use_combo {
            // Random element of Der(A).
            let basis = whk_core::lie::as_matrices(&derivation_space(&a), 3);
            basis.iter().zip(&combo).fold(Matrix::zeros(3, 3), |acc, (b, &c)| acc.add(&b.scale(&int(c))).unwrap())
        } else {
            Matrix::from_flat(3, 3, entries.iter().map(|&e| int(e)).collect()).unwrap()
        };
        let l = FiniteDimLieAlgebra::abelian(vec![s("p")]).unwrap();
        let rep = check_lie_module_algebra(&l, &a, &[tau]).unwrap();
        if rep.check_passed("leibniz") {
            prop_assert!(rep.check_passed("unit"));
        }
        if use_combo {
            prop_assert!(rep.check_passed("leibniz"));
        }
    }

    #[test]
    fn substitutions_conjugate_fields_into_fields(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, d in -2i64..=2) {
        let mat = m(&[&[a, b], &[c, d]]);
        prop_assume!(mat.is_invertible());
        let p = PolynomialTruncation::new(vec![s("x1"), s("x2")], 2).unwrap();
        let nu = p.linear_substitution(&mat).unwrap();
        let nu_inv = nu.inverse().unwrap();
        let conj_coords = gl_conjugation(&mat).unwrap();
        for k in 0..4 {
            let conj = nu.dot(&p.elementary_field(k / 2, k % 2)).dot(&nu_inv);
            let mut expected = Matrix::zeros(p.dim(), p.dim());
            for (q, coeff) in conj_coords.column(k).iter().enumerate() {
                expected = expected.add(&p.elementary_field(q / 2, q % 2).scale(coeff)).unwrap();
            }
            prop_assert_eq!(conj, expected);
        }
    }
}

#[test]
fn rational_scaling_of_a_derivation_is_a_derivation() {
    let a = nilpotent_truncation(4);
    let basis = whk_core::lie::as_matrices(&derivation_space(&a), 4);
    let scaled: Vec<Matrix> = vec![basis[0].scale(&rat(3, 7))];
    let l = FiniteDimLieAlgebra::abelian(vec![s("p")]).unwrap();
    assert!(check_lie_module_algebra(&l, &a, &scaled).unwrap().passed());
    let _: Scalar = int(0);
}
