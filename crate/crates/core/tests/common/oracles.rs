//! Reference computations used to cross-check the library, written without its solvers.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use whk_core::exact::{int, Matrix, Scalar, Subspace};
use whk_core::groupoid::FiniteGroupoid;
use whk_core::module_alg::{Carrier, GroupoidAction, XDecompAlgebra};
use whk_core::walg::{tensor_of, FiniteDimAlgebra, WeakHopfPresentation};

/// All set partitions of `0..n` as block labels (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn go(pos: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for b in 0..=max + 1 {
            if pos == 0 && b > 0 {
                break;
            }
            current[pos] = b;
            go(pos + 1, max.max(b), current, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    go(0, 0, &mut current, &mut out);
    out.sort();
    out.dedup();
    out
}

/// True when every basis vector is grouplike: `Δ(b) = b⊗b`, `ε(b) = 1`.
pub fn has_grouplike_basis(h: &WeakHopfPresentation) -> bool {
    (0..h.dim()).all(|i| {
        let b = h.algebra().basis_vec(i);
        h.delta(&b) == tensor_of(&[&b, &b]) && h.eps(&b).is_one()
    })
}

/// Every Hopf ideal inside `w`, for `h` with a grouplike basis. A coideal killed by `ε` in a
/// coalgebra spanned by grouplikes is spanned by differences of grouplikes inside the blocks of a
/// partition, so enumerating partitions enumerates all candidates; each one is then tested for
/// containment in `w` and for the ideal and antipode conditions directly.
pub fn hopf_ideals_by_partition(h: &WeakHopfPresentation, w: &Subspace) -> Vec<Subspace> {
    assert!(has_grouplike_basis(h), "oracle needs a grouplike basis");
    let n = h.dim();
    let s = h.require_antipode().expect("antipode");
    let mut found = Vec::new();
    for part in set_partitions(n) {
        let mut gens = Vec::new();
        for i in 0..n {
            if let Some(rep) = (0..i).find(|&j| part[j] == part[i]) {
                let mut d = vec![Scalar::zero(); n];
                d[i] = int(1);
                d[rep] = int(-1);
                gens.push(d);
            }
        }
        let ideal = Subspace::span(n, &gens).unwrap();
        if !ideal.is_subspace_of(w).unwrap() {
            continue;
        }
        let closed = gens.iter().all(|d| {
            (0..n).all(|k| {
                let b = h.algebra().basis_vec(k);
                ideal.contains(&h.mul(&b, d)).unwrap() && ideal.contains(&h.mul(d, &b)).unwrap()
            }) && ideal.contains(&s.apply(d)).unwrap()
        });
        if closed && !found.contains(&ideal) {
            found.push(ideal);
        }
    }
    found
}

fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / pivot.clone();
                for j in c..cols {
                    let t = rows[r][j].clone() * f.clone();
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim Der(A)` from the dense Leibniz system in the unknowns `D[r][c]`.
pub fn dense_derivation_dim(a: &FiniteDimAlgebra) -> usize {
    let n = a.dim();
    if n == 0 {
        return 0;
    }
    let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for (i, j, k, c) in a.entries() {
        table[i][j][k] += c;
    }
    let unknown = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                for k in 0..n {
                    // D(b_i b_j)_r
                    row[unknown(r, k)] += table[i][j][k].clone();
                    // (b_i D(b_j))_r and (D(b_i) b_j)_r
                    row[unknown(k, j)] -= table[i][k][r].clone();
                    row[unknown(k, i)] -= table[k][j][r].clone();
                }
                rows.push(row);
            }
        }
    }
    n * n - rank(rows)
}

fn components(g: &FiniteGroupoid) -> Vec<Vec<usize>> {
    let k = g.objects().len();
    let mut comp = vec![usize::MAX; k];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in 0..k {
        if comp[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..k)
            .filter(|&y| (0..g.num_morphisms()).any(|m| g.source(m) == x && g.target(m) == y))
            .collect();
        for &y in &members {
            comp[y] = out.len();
        }
        out.push(members);
    }
    out
}

fn random_frame<R: Rng>(rng: &mut R, n: usize, plain: bool) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (c, &r) in perm.iter().enumerate() {
        m[(r, c)] = if plain { int(1) } else { int(*[1, 1, -1, 2, 3].choose(rng).unwrap()) };
    }
    m
}

/// A random valid action of `g` on diagonal algebras: on each component with base object `x0`,
/// `ν_g = F_y ρ(γ_y⁻¹ g γ_x) F_x⁻¹` for a representation `ρ` of the vertex group (trivial or
/// regular) and random monomial frames `F`. With `plain` frames are permutations and the result
/// is a module algebra.
pub fn random_diagonal_action<R: Rng>(rng: &mut R, g: &FiniteGroupoid, plain: bool) -> GroupoidAction {
    let k = g.objects().len();
    let mut dims = vec![0; k];
    let mut maps = vec![Matrix::zeros(0, 0); g.num_morphisms()];
    for members in components(g) {
        let x0 = members[0];
        let loops: Vec<usize> =
            (0..g.num_morphisms()).filter(|&m| g.source(m) == x0 && g.target(m) == x0).collect();
        let regular = rng.gen_bool(0.5);
        let n = if regular { loops.len() } else { rng.gen_range(1..=3) };
        let gamma: Vec<usize> = (0..k)
            .map(|x| {
                if !members.contains(&x) {
                    return usize::MAX;
                }
                if x == x0 {
                    g.identity(x0)
                } else {
                    (0..g.num_morphisms()).find(|&m| g.source(m) == x0 && g.target(m) == x).unwrap()
                }
            })
            .collect();
        let rho = |l: usize| -> Matrix {
            if !regular {
                return Matrix::identity(n);
            }
            let mut m = Matrix::zeros(n, n);
            for (c, &h) in loops.iter().enumerate() {
                let r = loops.iter().position(|&p| p == g.compose(l, h).unwrap()).unwrap();
                m[(r, c)] = int(1);
            }
            m
        };
        let frames: Vec<Option<Matrix>> =
            (0..k).map(|x| members.contains(&x).then(|| random_frame(rng, n, plain))).collect();
        for &x in &members {
            dims[x] = n;
        }
        for m in 0..g.num_morphisms() {
            let (x, y) = (g.source(m), g.target(m));
            if !members.contains(&x) {
                continue;
            }
            let loop_ = g.compose(g.inverse(gamma[y]), g.compose(m, gamma[x]).unwrap()).unwrap();
            let fx = frames[x].as_ref().unwrap();
            let fy = frames[y].as_ref().unwrap();
            maps[m] = fy.dot(&rho(loop_)).dot(&fx.inverse().unwrap());
        }
    }
    let comps = (0..k)
        .map(|x| {
            let labels: Vec<String> = (0..dims[x]).map(|i| format!("{}_{}", g.objects()[x], i)).collect();
            let refs: Vec<&str> = labels.iter().map(|l| l.as_str()).collect();
            super::diagonal(&refs)
        })
        .collect();
    let alg = XDecompAlgebra::new(g.objects().to_vec(), comps).unwrap();
    GroupoidAction::new(g.clone(), Carrier::algebra(alg), maps).unwrap()
}
