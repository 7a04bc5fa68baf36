//! Splitting commutative algebras over Q: radicals, primitive idempotents and characters.
//!
//! Only rational eigenvalues are ever extracted. A component on which some element has an
//! irrational eigenvalue is a field extension of Q with no rational character; such components
//! are dropped and the result is flagged incomplete.

use num_traits::{One, Zero};

use crate::exact::{axpy, scale_vec, sub_vec, zero_vec, Matrix, Poly, Scalar, Subspace};
use crate::walg::{FiniteDimAlgebra, WalgError};

/// Radical of the trace form `(x, y) -> tr(L_{xy})`, which is the Jacobson radical in
/// characteristic zero.
pub fn trace_radical(a: &FiniteDimAlgebra) -> Subspace {
    let n = a.dim();
    let traces: Vec<Scalar> = (0..n)
        .map(|k| {
            (0..n).fold(Scalar::zero(), |s, j| {
                s + a
                    .product(k, j)
                    .iter()
                    .filter(|(p, _)| *p == j)
                    .fold(Scalar::zero(), |t, (_, c)| t + c)
            })
        })
        .collect();
    let mut form = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            form[(i, j)] = a
                .product(i, j)
                .iter()
                .fold(Scalar::zero(), |s, (k, c)| s + c * &traces[*k]);
        }
    }
    form.kernel()
}

/// Two-sided ideal generated by all commutators `b_i b_j - b_j b_i`.
pub fn commutator_ideal(a: &FiniteDimAlgebra) -> Subspace {
    let n = a.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = sub_vec(
                &a.mul(&a.basis_vec(i), &a.basis_vec(j)),
                &a.mul(&a.basis_vec(j), &a.basis_vec(i)),
            );
            if !d.iter().all(Zero::is_zero) {
                gens.push(d);
            }
        }
    }
    let span = Subspace::span(n, &gens).expect("ambient length");
    a.ideal_closure(&span)
}

/// Minimal polynomial of `x` inside the algebra `eA` whose identity is `e`.
pub fn minimal_polynomial(a: &FiniteDimAlgebra, x: &[Scalar], e: &[Scalar]) -> Poly {
    let n = a.dim();
    let mut powers: Vec<Vec<Scalar>> = vec![e.to_vec()];
    loop {
        let next = a.mul(powers.last().expect("nonempty"), x);
        let m = Matrix::from_columns(n, &powers).expect("columns of the ambient length");
        if let Some(c) = m.solve(&next).expect("matching length") {
            let mut coeffs: Vec<Scalar> = c.into_iter().map(|v| -v).collect();
            coeffs.push(Scalar::one());
            return Poly::new(coeffs);
        }
        powers.push(next);
    }
}

/// `p(x)` in the algebra with identity `e`, by Horner's rule.
fn eval_in(a: &FiniteDimAlgebra, p: &Poly, x: &[Scalar], e: &[Scalar]) -> Vec<Scalar> {
    let mut acc = zero_vec(a.dim());
    for c in p.coeffs().iter().rev() {
        acc = a.mul(&acc, x);
        axpy(&mut acc, c, e);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct Splitting {
    /// Primitive idempotents with one-dimensional components, sorted lexicographically.
    pub idempotents: Vec<Vec<Scalar>>,
    /// False when some component does not split over Q.
    pub complete: bool,
}

/// Primitive idempotents of a commutative semisimple algebra by iterated eigen-splitting.
pub fn split_commutative(a: &FiniteDimAlgebra) -> Result<Splitting, WalgError> {
    let mut stack = vec![a.unit().to_vec()];
    let mut done = Vec::new();
    let mut complete = true;
    while let Some(e) = stack.pop() {
        if e.iter().all(Zero::is_zero) {
            continue;
        }
        let component = a.left_mul_matrix(&e).image();
        if component.dim() == 1 {
            done.push(e);
            continue;
        }
        let mut split = false;
        for x in component.basis() {
            let mp = minimal_polynomial(a, &x, &e);
            if mp.degree().unwrap_or(0) < 2 {
                continue;
            }
            let roots = mp.rational_roots();
            let mut residual = mp.clone();
            for r in &roots {
                residual = residual.deflate(r);
            }
            if residual.degree().unwrap_or(0) > 0 {
                complete = false;
            }
            for r in &roots {
                let mut lagrange = residual.clone();
                for s in roots.iter().filter(|s| *s != r) {
                    lagrange = mul_linear(&lagrange, s);
                }
                let norm = lagrange.eval(r);
                let idem = scale_vec(&norm.recip(), &eval_in(a, &lagrange, &x, &e));
                stack.push(idem);
            }
            split = true;
            break;
        }
        if !split {
            return Err(WalgError::Inconsistent(
                "component of dimension > 1 in which every element is scalar; algebra is not semisimple".into(),
            ));
        }
    }
    done.sort();
    Ok(Splitting {
        idempotents: done,
        complete,
    })
}

/// `p(t) * (t - root)`
fn mul_linear(p: &Poly, root: &Scalar) -> Poly {
    let c = p.coeffs();
    let mut out = zero_vec(c.len() + 1);
    for (i, x) in c.iter().enumerate() {
        out[i + 1] += x;
        out[i] -= x * root;
    }
    Poly::new(out)
}

/// Rational unital characters of an arbitrary finite-dimensional algebra, as functionals in the
/// coordinates of `a`. Obtained by passing to the commutative quotient, removing the radical and
/// splitting into one-dimensional components.
pub fn rational_characters(a: &FiniteDimAlgebra) -> Result<(Vec<Vec<Scalar>>, bool), WalgError> {
    let (comm, p1) = a.quotient(&commutator_ideal(a))?;
    if comm.dim() == 0 {
        return Ok((Vec::new(), true));
    }
    let (ss, p2) = comm.quotient(&trace_radical(&comm))?;
    if ss.dim() == 0 {
        return Ok((Vec::new(), true));
    }
    let proj = p2.dot(&p1);
    let split = split_commutative(&ss)?;
    let mut chars = Vec::new();
    for e in &split.idempotents {
        let p = e
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero idempotent");
        let on_basis: Vec<Scalar> = (0..ss.dim())
            .map(|j| &ss.mul_basis_left(j, e)[p] / &e[p])
            .collect();
        let functional: Vec<Scalar> = (0..a.dim())
            .map(|k| (0..ss.dim()).fold(Scalar::zero(), |s, j| s + &on_basis[j] * &proj[(j, k)]))
            .collect();
        chars.push(functional);
    }
    chars.sort();
    Ok((chars, split.complete))
}
