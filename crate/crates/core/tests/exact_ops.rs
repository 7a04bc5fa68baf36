mod common;

use common::*;
use proptest::prelude::*;
use whk_core::exact::{int, parse_scalar, rat, format_scalar, Matrix, Scalar, Subspace};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-4i64..=4, 1i64..=3), rows * cols).prop_map(move |entries| {
        let data = entries.into_iter().map(|(n, d)| rat(n, d)).collect();
        Matrix::from_flat(rows, cols, data).unwrap()
    })
}

fn small_vectors(count: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, dim), 0..=count)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(int).collect()).collect())
}

#[test]
fn kernel_examples() {
    assert!(Matrix::identity(3).kernel().is_zero());
    assert!(Matrix::zeros(2, 2).kernel().is_full());
    let k = m(&[&[1, 1], &[2, 2]]).kernel();
    assert_eq!(k, Subspace::span(2, &[v(&[1, -1])]).unwrap());
}

#[test]
fn solve_examples() {
    let b = v(&[3, -1, 7]);
    assert_eq!(Matrix::identity(3).solve(&b).unwrap(), Some(b));
    assert_eq!(m(&[&[1, 2], &[2, 4]]).solve(&v(&[1, 3])).unwrap(), None);
    assert_eq!(m(&[&[2]]).solve(&v(&[1])).unwrap(), Some(vec![rat(1, 2)]));
    assert!(m(&[&[1, 0]]).solve(&v(&[1, 2])).is_err());
}

#[test]
fn subspace_examples() {
    let s = Subspace::span(3, &[v(&[1, 2, 0]), v(&[0, 1, 1])]).unwrap();
    assert_eq!(s.intersection(&s).unwrap(), s);
    let e1 = Subspace::span(3, &[v(&[1, 0, 0])]).unwrap();
    let e2 = Subspace::span(3, &[v(&[0, 1, 0])]).unwrap();
    assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
    let a = Subspace::span(2, &[v(&[1, 1]), v(&[0, 1])]).unwrap();
    let b = Subspace::span(2, &[v(&[1, 0])]).unwrap();
    assert_eq!(a.intersection(&b).unwrap(), b);
    assert!(e1.sum(&Subspace::zero(2)).is_err());
}

#[test]
fn kronecker_examples() {
    assert_eq!(Matrix::identity(2).kronecker(&Matrix::identity(3)), Matrix::identity(6));
    assert!(m(&[&[1, 2], &[3, 4]]).kronecker(&Matrix::zeros(2, 3)).is_zero());
    assert_eq!(m(&[&[1, 2]]).kronecker(&m(&[&[3], &[4]])), m(&[&[3, 6], &[4, 8]]));
}

#[test]
fn scalar_text_round_trip() {
    assert_eq!(parse_scalar("-6/4"), Some(rat(-3, 2)));
    assert_eq!(format_scalar(&rat(-3, 2)), "-3/2");
    assert_eq!(format_scalar(&int(5)), "5");
    assert_eq!(parse_scalar("1/0"), None);
    assert_eq!(parse_scalar("0.5"), None);
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in small_matrix(4, 4), b in small_matrix(4, 4), c in small_matrix(4, 4)) {
        prop_assert_eq!(a.dot(&b).dot(&c), a.dot(&b.dot(&c)));
    }

    #[test]
    fn rank_nullity(a in small_matrix(3, 5)) {
        prop_assert_eq!(a.kernel().dim() + a.rank(), 5);
        for k in a.kernel().basis() {
            prop_assert!(a.apply(&k).iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn solve_results_are_verified(a in small_matrix(3, 3), x in prop::collection::vec(-3i64..=3, 3)) {
        let x: Vec<Scalar> = x.into_iter().map(int).collect();
        let b = a.apply(&x);
        let sol = a.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(a.apply(&sol), b);
    }

    #[test]
    fn sum_intersection_dimension_formula(s in small_vectors(3, 4), t in small_vectors(3, 4)) {
        let s = Subspace::span(4, &s).unwrap();
        let t = Subspace::span(4, &t).unwrap();
        let sum = s.sum(&t).unwrap();
        let meet = s.intersection(&t).unwrap();
        prop_assert_eq!(s.dim() + t.dim(), sum.dim() + meet.dim());
        prop_assert!(meet.is_subspace_of(&s).unwrap());
        prop_assert!(meet.is_subspace_of(&t).unwrap());
        prop_assert_eq!(s.dim() + s.annihilator().dim(), 4);
    }

    #[test]
    fn echelon_form_is_canonical(s in small_vectors(3, 4), a in small_matrix(3, 3)) {
        let span = Subspace::span(4, &s).unwrap();
        // Re-spanning by an invertible recombination of the basis gives identical bases.
        let basis = span.basis();
        if basis.len() == 3 && a.is_invertible() {
            let mixed: Vec<Vec<Scalar>> = (0..3)
                .map(|i| {
                    let mut out = vec![int(0); 4];
                    for (j, b) in basis.iter().enumerate() {
                        whk_core::exact::axpy(&mut out, &a[(i, j)], b);
                    }
                    out
                })
                .collect();
            prop_assert_eq!(Subspace::span(4, &mixed).unwrap(), span.clone());
        }
        prop_assert_eq!(Subspace::span(4, &span.basis()).unwrap(), span);
    }

    #[test]
    fn kronecker_mixed_product(a in small_matrix(2, 3), b in small_matrix(2, 2), c in small_matrix(3, 2), d in small_matrix(2, 1)) {
        prop_assert_eq!(a.kronecker(&b).dot(&c.kronecker(&d)), a.dot(&c).kronecker(&b.dot(&d)));
    }

    #[test]
    fn kronecker_is_bilinear(a in small_matrix(2, 2), a2 in small_matrix(2, 2), b in small_matrix(2, 3), n in -3i64..=3) {
        let c = int(n);
        prop_assert_eq!(a.add(&a2).unwrap().kronecker(&b), a.kronecker(&b).add(&a2.kronecker(&b)).unwrap());
        prop_assert_eq!(a.scale(&c).kronecker(&b), a.kronecker(&b.scale(&c)));
    }

    #[test]
    fn inverse_is_two_sided(a in small_matrix(3, 3)) {
        if let Ok(inv) = a.inverse() {
            prop_assert_eq!(a.dot(&inv), Matrix::identity(3));
            prop_assert_eq!(inv.dot(&a), Matrix::identity(3));
        } else {
            prop_assert_eq!(a.determinant().unwrap(), int(0));
        }
    }
}
