//! Acceptance suite: one PASS/FAIL line per criterion, with limits pinned below.
//!
//! Lines are written straight to stdout so they appear without `--nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::oracles::{dense_derivation_dim, has_grouplike_basis, hopf_ideals_by_partition, random_diagonal_action};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whk::resolve::Resolved;
use whk::{Format, Invocation, Options};
use whk_core::exact::{int, Matrix, Subspace};
use whk_core::groupoid::{groupoid_algebra, groupoid_idempotents, same_by_morphism_labels, FiniteGroupoid};
use whk_core::grouplike::{gamma_groupoid, gamma_objects_via_idempotents};
use whk_core::lie::{
    as_matrices, bounded_envelope_consistency, check_algebroid_action, check_lie_module_algebra, conjugate_action,
    derivation_space, FiniteDimLieAlgebra,
};
use whk_core::module_alg::{
    action_to_functor, check_groupoid_module, check_groupoid_module_algebra, check_h_module_algebra, functor_to_action,
    inner_faithful, largest_hopf_ideal_in, linearize_action,
};
use whk_core::smash::{build_smash, check_smash_conditions, smash_base_idempotents};
use whk_core::truncation::PolynomialTruncation;
use whk_core::walg::{check_weak_hopf, FiniteDimAlgebra, WeakHopfPresentation};

const SEED: u64 = 0x5eed_2026;
const RANDOM_GROUPOIDS: usize = 50;
const MAX_OBJECTS: usize = 4;
const MAX_MORPHISMS: usize = 12;
const PER_GROUPOID_LIMIT: Duration = Duration::from_secs(1);
const VERTEX_GROUP_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_MAX_DIM: usize = 6;
const SMASH_LIMIT: Duration = Duration::from_secs(2);
const POLYNOMIAL_LIMIT: Duration = Duration::from_secs(10);
const POLYNOMIAL_DEGREE: usize = 3;
const ENVELOPE_DEGREE: usize = 2;
const IMPLICATION_INSTANCES: usize = 200;
const DETERMINISM_REPEATS: usize = 2;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn emit(number: usize, title: &str, v: &Verdict) {
    let tag = if v.passed { "PASS" } else { "FAIL" };
    let line = format!("{tag} criterion {number}: {title} ({})\n", v.detail);
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).expect("stdout");
    out.flush().expect("stdout");
}

fn ms(d: Duration) -> String {
    format!("{} ms", d.as_millis())
}

/// Groupoids assembled from connected parts, rejecting those above the size bounds.
fn random_groupoids(count: usize) -> Vec<FiniteGroupoid> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    while out.len() < count {
        let parts: Vec<(usize, usize)> =
            (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(0..5), rng.gen_range(1..=3))).collect();
        let objects: usize = parts.iter().map(|p| p.1).sum();
        if objects > MAX_OBJECTS {
            continue;
        }
        let g = assembled_groupoid(&parts);
        if g.num_morphisms() <= MAX_MORPHISMS {
            out.push(g);
        }
    }
    out
}

fn criterion_groupoid_algebras(groupoids: &[FiniteGroupoid]) -> Verdict {
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for (i, g) in groupoids.iter().enumerate() {
        let start = Instant::now();
        let ok = groupoid_algebra(g).map(|h| check_weak_hopf(&h).passed()).unwrap_or(false);
        let took = start.elapsed();
        slowest = slowest.max(took);
        if !ok || took >= PER_GROUPOID_LIMIT {
            failures.push(i);
        }
    }
    verdict(
        failures.is_empty(),
        format!("{} groupoids, slowest {}, failing {:?}", groupoids.len(), ms(slowest), failures),
    )
}

fn sorted(mut v: Vec<Vec<whk_core::exact::Scalar>>) -> Vec<Vec<whk_core::exact::Scalar>> {
    v.sort();
    v
}

fn criterion_gamma(groupoids: &[FiniteGroupoid]) -> Verdict {
    let mut failures = Vec::new();
    let mut compared = 0;
    for (i, g) in groupoids.iter().enumerate() {
        let h = groupoid_algebra(g).expect("groupoid algebra");
        let round_trip = gamma_groupoid(&h).map(|back| same_by_morphism_labels(g, &back)).unwrap_or(false);
        let objects_agree = match gamma_objects_via_idempotents(&h, 16) {
            Ok(found) => {
                compared += 1;
                let expected = groupoid_idempotents(g).into_iter().map(|(_, e)| e).collect();
                sorted(found) == sorted(expected)
            }
            Err(_) => true,
        };
        if !round_trip || !objects_agree {
            failures.push(i);
        }
    }
    verdict(
        failures.is_empty(),
        format!("{} round trips, {} idempotent comparisons, failing {:?}", groupoids.len(), compared, failures),
    )
}

fn criterion_examples() -> Verdict {
    let swap = swap_action();
    let total = swap.carrier().as_algebra().expect("algebra carrier").total().clone();
    let linearized = linearize_action(&swap).expect("linearize");
    let swap_ok = check_groupoid_module(&swap).passed()
        && check_groupoid_module_algebra(&swap).expect("module algebra").passed()
        && action_to_functor(&swap).and_then(|f| functor_to_action(&f)).is_ok_and(|back| back == swap)
        && check_h_module_algebra(&linearized, &total).expect("linearized").passed();

    let flip = sign_flip_action();
    let flip_module = check_groupoid_module(&flip).passed();
    let report = check_groupoid_module_algebra(&flip).expect("module algebra");
    let witness_ok = report.check("unitality").is_some_and(|c| {
        !c.passed()
            && c.failures.iter().any(|w| {
                w.named("input") == Some(v(&[1, 1, 1]).as_slice()) && w.named("image") == Some(v(&[-1, 1, 1]).as_slice())
            })
    });
    verdict(
        swap_ok && flip_module && witness_ok,
        format!("swap {swap_ok}, sign flip module {flip_module}, unitality witness (1,1,1) -> (-1,1,1) {witness_ok}"),
    )
}

fn criterion_vertex_groups() -> Verdict {
    let start = Instant::now();
    let lin = linearize_action(&vertex_group_action()).expect("linearize");
    let res = inner_faithful(&lin).expect("inner faithful");
    let labels = lin.hopf().labels();
    let idx = |l: &str| labels.iter().position(|x| x == l).expect("label");
    let mut difference = vec![int(0); lin.hopf().dim()];
    difference[idx("g2")] = int(1);
    difference[idx("e2")] = int(-1);
    let contains = !res.ideal.ideal.is_zero()
        && res.ideal.certified()
        && res.ideal.ideal.contains(&difference).expect("membership");
    let trivialized =
        inner_faithful(&linearize_action(&trivialized_vertex_group_action()).expect("linearize")).expect("inner faithful");
    let took = start.elapsed();
    verdict(
        contains && trivialized.faithful && took < VERTEX_GROUP_LIMIT,
        format!(
            "ideal {:?}, trivialized faithful {}, {}",
            res.ideal.display(labels),
            trivialized.faithful,
            ms(took)
        ),
    )
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

/// Weak Hopf instances of the corpus with the subspaces to search: zero, everything, any
/// declared ideal generators, and the annihilator of every action on a carrier over them.
fn corpus_ideal_instances() -> Vec<(String, WeakHopfPresentation, Subspace)> {
    let mut out = Vec::new();
    for path in corpus_files() {
        let text = std::fs::read_to_string(&path).expect("corpus file");
        let Ok(ws) = whk::load(&text) else { continue };
        let stem = path.file_name().unwrap().to_string_lossy().to_string();
        for (name, obj) in &ws.objects {
            match obj {
                Resolved::WeakHopf(w) => {
                    let n = w.hopf.dim();
                    out.push((format!("{stem}:{name}:zero"), w.hopf.clone(), Subspace::zero(n)));
                    out.push((format!("{stem}:{name}:full"), w.hopf.clone(), Subspace::full(n)));
                    if !w.ideal_generators.is_empty() {
                        let span = Subspace::span(n, &w.ideal_generators).expect("span");
                        out.push((format!("{stem}:{name}:generators"), w.hopf.clone(), span));
                    }
                }
                Resolved::GroupoidAction(a) => {
                    if let Ok(lin) = linearize_action(&a.action) {
                        out.push((format!("{stem}:{name}:annihilator"), lin.hopf().clone(), lin.annihilator()));
                    }
                }
                _ => {}
            }
        }
    }
    out.retain(|(_, h, _)| h.dim() <= ORACLE_MAX_DIM && h.require_antipode().is_ok());
    out
}

fn criterion_ideal_oracle() -> Verdict {
    let start = Instant::now();
    let instances = corpus_ideal_instances();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    for (name, h, w) in &instances {
        if !has_grouplike_basis(h) {
            skipped.push(name.clone());
            continue;
        }
        let largest = largest_hopf_ideal_in(h, w).expect("largest ideal");
        let all = hopf_ideals_by_partition(h, w);
        let agrees = largest.certified()
            && all.contains(&largest.ideal)
            && all.iter().all(|i| i.is_subspace_of(&largest.ideal).expect("containment"));
        if !agrees {
            failures.push(name.clone());
        }
    }
    let took = start.elapsed();
    verdict(
        failures.is_empty() && skipped.is_empty() && !instances.is_empty() && took < ORACLE_LIMIT,
        format!(
            "{} instances, failing {:?}, without grouplike basis {:?}, {}",
            instances.len(),
            failures,
            skipped,
            ms(took)
        ),
    )
}

fn criterion_smash() -> Verdict {
    let start = Instant::now();
    let base = block_base();
    let act = block_swap_action();
    let conditions = check_smash_conditions(&base, &act).expect("conditions").passed();
    let sp = build_smash(&base, &act).expect("smash");
    let weak_hopf = sp.require_hopf().is_ok_and(|h| check_weak_hopf(h).passed());
    let idempotents = smash_base_idempotents(&sp).is_ok_and(|(_, r)| r.passed());
    let took = start.elapsed();
    verdict(
        conditions && weak_hopf && idempotents && sp.dim() == 8 && took < SMASH_LIMIT,
        format!(
            "dim {}, conditions {conditions}, weak Hopf {weak_hopf}, base idempotents {idempotents}, {}",
            sp.dim(),
            ms(took)
        ),
    )
}

fn truncation(variables: &[&str], degree: usize) -> FiniteDimAlgebra {
    PolynomialTruncation::new(variables.iter().map(|x| s(x)).collect(), degree)
        .expect("truncation")
        .algebra()
        .clone()
}

fn criterion_derivations() -> Verdict {
    let mut cases: Vec<(String, FiniteDimAlgebra, usize)> =
        (2..=5).map(|n| (format!("k[x]/(x^{n})"), truncation(&["x"], n - 1), n - 1)).collect();
    cases.push(("k x k".into(), diagonal(&["p", "q"]), 0));
    cases.push(("k[x,y]/(deg>2)".into(), truncation(&["x", "y"], 2), 10));
    let mut summary = Vec::new();
    let mut ok = true;
    for (name, a, expected) in &cases {
        let solved = derivation_space(a).dim();
        let dense = dense_derivation_dim(a);
        ok &= solved == dense && dense == *expected;
        summary.push(format!("{name}={solved}"));
    }
    verdict(ok, summary.join(", "))
}

fn criterion_polynomial() -> Verdict {
    let start = Instant::now();
    let setup = polynomial_setup(POLYNOMIAL_DEGREE);
    let action = check_algebroid_action(&setup.lie_action).expect("algebroid action").passed();
    let conjugation = conjugate_action(&setup.groupoid_action, &setup.lie_action, Some(&setup.lie_maps))
        .expect("conjugation")
        .report;
    let conjugation_ok = conjugation.passed() && conjugation.check("equivariance").is_some();
    let envelope = bounded_envelope_consistency(&setup.lie_action, &setup.groupoid_action, ENVELOPE_DEGREE)
        .expect("envelope")
        .passed();
    let took = start.elapsed();
    verdict(
        action && conjugation_ok && envelope && took < POLYNOMIAL_LIMIT,
        format!(
            "degree {POLYNOMIAL_DEGREE}, action {action}, conjugation {conjugation_ok}, envelope d={ENVELOPE_DEGREE} {envelope}, {}",
            ms(took)
        ),
    )
}

fn random_operator<R: Rng>(rng: &mut R, a: &FiniteDimAlgebra, derivations: &[Matrix]) -> Matrix {
    let n = a.dim();
    if rng.gen_bool(0.5) && !derivations.is_empty() {
        derivations.iter().fold(Matrix::zeros(n, n), |acc, d| {
            acc.add(&d.scale(&int(rng.gen_range(-3..=3)))).expect("same shape")
        })
    } else {
        let mut m = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if rng.gen_bool(0.3) {
                    m[(r, c)] = int(rng.gen_range(-2..=2));
                }
            }
        }
        m
    }
}

fn criterion_implications() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut groupoid_counterexamples = 0;
    let mut multiplicative = 0;
    for _ in 0..IMPLICATION_INSTANCES {
        let parts: Vec<(usize, usize)> =
            (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(0..5), rng.gen_range(1..=2))).collect();
        let plain = rng.gen_bool(0.5);
        let act = random_diagonal_action(&mut rng, &assembled_groupoid(&parts), plain);
        let report = check_groupoid_module_algebra(&act).expect("module algebra");
        if report.check_passed("multiplicativity") {
            multiplicative += 1;
            if !report.check_passed("unitality") {
                groupoid_counterexamples += 1;
            }
        }
    }

    let algebras: Vec<FiniteDimAlgebra> =
        vec![truncation(&["x"], 2), truncation(&["x"], 3), truncation(&["x", "y"], 2), diagonal(&["p", "q"])];
    let derivations: Vec<Vec<Matrix>> =
        algebras.iter().map(|a| as_matrices(&derivation_space(a), a.dim())).collect();
    let lie = FiniteDimLieAlgebra::abelian(vec![s("p")]).expect("abelian");
    let mut lie_counterexamples = 0;
    let mut leibniz = 0;
    for i in 0..IMPLICATION_INSTANCES {
        let k = i % algebras.len();
        let tau = random_operator(&mut rng, &algebras[k], &derivations[k]);
        let report = check_lie_module_algebra(&lie, &algebras[k], &[tau]).expect("lie module algebra");
        if report.check_passed("leibniz") {
            leibniz += 1;
            if !report.check_passed("unit") {
                lie_counterexamples += 1;
            }
        }
    }
    verdict(
        groupoid_counterexamples == 0 && lie_counterexamples == 0 && multiplicative > 0 && leibniz > 0,
        format!(
            "{IMPLICATION_INSTANCES} groupoid instances ({multiplicative} multiplicative, {groupoid_counterexamples} counterexamples), \
             {IMPLICATION_INSTANCES} Lie instances ({leibniz} Leibniz, {lie_counterexamples} counterexamples)"
        ),
    )
}

fn report_json(path: &Path) -> (String, i32) {
    let inv = Invocation {
        command: "report".into(),
        file: path.file_name().unwrap().to_string_lossy().to_string(),
        format: Format::Json,
        options: Options::default(),
        timing: false,
    };
    let text = std::fs::read_to_string(path).expect("corpus file");
    let out = whk::run_text(&inv, &text);
    (out.stdout, out.code)
}

fn criterion_determinism() -> Verdict {
    let files = corpus_files();
    let mut differing = Vec::new();
    for path in &files {
        let first = report_json(path);
        for _ in 1..DETERMINISM_REPEATS {
            if report_json(path) != first {
                differing.push(path.file_name().unwrap().to_string_lossy().to_string());
            }
        }
    }
    verdict(
        differing.is_empty() && !files.is_empty(),
        format!("{} corpus files x {DETERMINISM_REPEATS} runs, differing {:?}", files.len(), differing),
    )
}

#[test]
fn acceptance() {
    let mut groupoids = random_groupoids(RANDOM_GROUPOIDS);
    groupoids.push(eq_gg());
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("groupoid algebras pass the weak Hopf suite", Box::new(|| criterion_groupoid_algebras(&groupoids))),
        ("grouplikes of a groupoid algebra recover the groupoid", Box::new(|| criterion_gamma(&groupoids))),
        ("swap and sign-flip examples", Box::new(criterion_examples)),
        ("inner faithfulness of the two-vertex-group scenario", Box::new(criterion_vertex_groups)),
        ("largest Hopf ideal agrees with exhaustive search", Box::new(criterion_ideal_oracle)),
        ("block-swap smash product is weak Hopf", Box::new(criterion_smash)),
        ("derivation dimensions agree with a dense solve", Box::new(criterion_derivations)),
        ("gl2 actions on truncated polynomial algebras", Box::new(criterion_polynomial)),
        ("multiplicativity implies unitality, Leibniz implies unit kill", Box::new(criterion_implications)),
        ("repeated corpus reports are byte-identical", Box::new(criterion_determinism)),
    ];
    std::io::stdout().lock().write_all(b"\n").expect("stdout");
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let v = run();
        emit(i + 1, title, &v);
        if !v.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
