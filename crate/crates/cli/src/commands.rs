//! Command dispatch: each command picks a target block and produces a report plus a result.

use serde_json::{json, Value};
use whk_core::exact::{format_scalar, Matrix};
use whk_core::grouplike::{
    check_gamma_dichotomy, enumerate_grouplikes, gamma_groupoid, gamma_objects_via_idempotents, is_grouplike,
    local_unit_closure_check, LocalUnitGroupoid,
};
use whk_core::groupoid::{
    check_groupoid, check_groupoid_hom, groupoid_algebra, groupoid_idempotents, linearize_hom,
    same_by_morphism_labels, FiniteGroupoid,
};
use whk_core::lie::{
    bounded_envelope_consistency, check_algebroid, check_algebroid_action, check_bracket_closure, conjugate_action,
    der_x, derivation_space,
};
use whk_core::module_alg::{
    action_to_functor, check_groupoid_module, check_groupoid_module_algebra, check_h_module_algebra,
    check_x_map, decompose_from_idempotents, functor_to_action, ideal_from_generators, inner_faithful,
    is_hopf_ideal, linearize_action, normalize_trailing, ModuleError, XStructure,
};
use whk_core::report::{combination, Check, Report, Witness};
use whk_core::smash::{build_smash, smash_base_idempotents};
use whk_core::walg::{check_counital, check_weak_hopf, counital_maps, is_cocommutative, is_hopf};

use crate::error::CliError;
use crate::resolve::{Resolved, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    CheckGroupoid,
    GroupoidAlgebra,
    CheckWeakHopf,
    Counital,
    Grouplikes,
    Gamma,
    LocalUnits,
    CheckModuleAlgebra,
    Decompose,
    Ideal,
    InnerFaithful,
    Smash,
    Der,
    CheckLieAction,
    EnvelopeConsistency,
    Report,
}

impl Command {
    pub const ALL: [Command; 16] = [
        Command::CheckGroupoid,
        Command::GroupoidAlgebra,
        Command::CheckWeakHopf,
        Command::Counital,
        Command::Grouplikes,
        Command::Gamma,
        Command::LocalUnits,
        Command::CheckModuleAlgebra,
        Command::Decompose,
        Command::Ideal,
        Command::InnerFaithful,
        Command::Smash,
        Command::Der,
        Command::CheckLieAction,
        Command::EnvelopeConsistency,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckGroupoid => "check-groupoid",
            Command::GroupoidAlgebra => "groupoid-algebra",
            Command::CheckWeakHopf => "check-weak-hopf",
            Command::Counital => "counital",
            Command::Grouplikes => "grouplikes",
            Command::Gamma => "gamma",
            Command::LocalUnits => "local-units",
            Command::CheckModuleAlgebra => "check-module-algebra",
            Command::Decompose => "decompose",
            Command::Ideal => "ideal",
            Command::InnerFaithful => "inner-faithful",
            Command::Smash => "smash",
            Command::Der => "der",
            Command::CheckLieAction => "check-lie-action",
            Command::EnvelopeConsistency => "envelope-consistency",
            Command::Report => "report",
        }
    }

    pub fn parse(name: &str) -> Result<Command, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| CliError::UnknownCommand(name.to_string()))
    }

    /// Whether the command can run on this block at all.
    fn accepts(self, obj: &Resolved) -> bool {
        use Command::*;
        match (self, obj) {
            (CheckGroupoid, Resolved::Groupoid(_) | Resolved::GroupoidHom(_) | Resolved::XMap { .. }) => true,
            (GroupoidAlgebra, Resolved::Groupoid(_)) => true,
            (CheckWeakHopf | Counital | Grouplikes | Gamma | Ideal, Resolved::WeakHopf(_)) => true,
            (LocalUnits, Resolved::Algebra(a)) => !a.idempotents.is_empty(),
            (CheckModuleAlgebra | Decompose | InnerFaithful | Smash, Resolved::GroupoidAction(_)) => true,
            (Der, Resolved::Algebra(_) | Resolved::XDecomp(_)) => true,
            (CheckLieAction | EnvelopeConsistency, Resolved::LieAction(_)) => true,
            _ => false,
        }
    }

    /// Whether the command runs on this block by default (no `--target`, and under `report`).
    fn default_for(self, obj: &Resolved) -> bool {
        if !self.accepts(obj) {
            return false;
        }
        match (self, obj) {
            (Command::Ideal, Resolved::WeakHopf(w)) => !w.ideal_generators.is_empty(),
            (Command::Smash, Resolved::GroupoidAction(a)) => a.base.is_some(),
            (Command::EnvelopeConsistency, Resolved::LieAction(l)) => l.groupoid_action.is_some(),
            _ => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub degree: usize,
    pub max_idempotents: usize,
    pub target: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            degree: whk_core::lie::DEFAULT_DEGREE,
            max_idempotents: whk_core::grouplike::DEFAULT_MAX_IDEMPOTENTS,
            target: None,
        }
    }
}

/// One command applied to one block.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: Command,
    pub target: String,
    pub report: Report,
    pub result: Value,
}

/// Picks the target block: `--target` if given, else the last block the command applies to.
pub fn select_target(ws: &Workspace, cmd: Command, opts: &Options) -> Result<String, CliError> {
    match &opts.target {
        Some(name) => {
            let obj = ws.get(name).ok_or_else(|| CliError::UnknownTarget(name.clone()))?;
            if !cmd.accepts(obj) {
                let kind = ws.file.block(name).map_or("unknown", |b| b.kind()).to_string();
                return Err(CliError::WrongTarget { command: cmd.name().into(), target: name.clone(), kind });
            }
            Ok(name.clone())
        }
        None => ws
            .file
            .blocks
            .iter()
            .rev()
            .map(|b| b.name())
            .find(|n| ws.get(n).is_some_and(|o| cmd.default_for(o)))
            .map(str::to_string)
            .ok_or_else(|| CliError::NoTarget(cmd.name().into())),
    }
}

/// Every `(command, block)` pair run by `report`, in file order.
pub fn report_plan(ws: &Workspace) -> Vec<(Command, String)> {
    let mut plan = Vec::new();
    for block in &ws.file.blocks {
        let obj = &ws.objects[block.name()];
        for cmd in Command::ALL {
            if cmd != Command::Report && cmd.default_for(obj) {
                plan.push((cmd, block.name().to_string()));
            }
        }
    }
    plan
}

pub fn run_on(ws: &Workspace, cmd: Command, target: &str, opts: &Options) -> Result<Outcome, CliError> {
    let obj = ws.get(target).ok_or_else(|| CliError::UnknownTarget(target.into()))?;
    let op = |e: &dyn std::fmt::Display| CliError::Operation {
        command: cmd.name().into(),
        target: target.into(),
        message: e.to_string(),
    };
    let (report, result) = dispatch(ws, cmd, obj, opts).map_err(|e| op(&e))?;
    Ok(Outcome { command: cmd, target: target.to_string(), report, result })
}

type Out = Result<(Report, Value), String>;

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn dispatch(ws: &Workspace, cmd: Command, obj: &Resolved, opts: &Options) -> Out {
    match (cmd, obj) {
        (Command::CheckGroupoid, Resolved::Groupoid(g)) => Ok((check_groupoid(g), groupoid_summary(g))),
        (Command::CheckGroupoid, Resolved::GroupoidHom(f)) => {
            let mut report = check_groupoid_hom(f);
            let lin = linearize_hom(f);
            let src = groupoid_algebra(&f.source).map_err(e)?;
            let tgt = groupoid_algebra(&f.target).map_err(e)?;
            let (si, ti) = (groupoid_idempotents(&f.source), groupoid_idempotents(&f.target));
            let (si, ti) = if f.x_preserving { (Some(&si[..]), Some(&ti[..])) } else { (None, None) };
            let x = check_x_map(&lin, XStructure::WeakHopf(&src), si, XStructure::WeakHopf(&tgt), ti).map_err(e)?;
            report.extend_prefixed("x_map", x);
            let result = json!({
                "source": f.source.objects().len(),
                "target": f.target.objects().len(),
                "x_preserving": f.x_preserving,
                "linearization": matrix_value(&lin),
            });
            Ok((report, result))
        }
        (Command::CheckGroupoid, Resolved::XMap { matrix, source, target }) => {
            let (s, t) = (ws.weak_hopf(source).ok_or("missing source")?, ws.weak_hopf(target).ok_or("missing target")?);
            let idems = |w: &crate::resolve::WeakHopfObject| match &w.groupoid {
                Some(g) => match ws.get(g) {
                    Some(Resolved::Groupoid(g)) => Some(groupoid_idempotents(g)),
                    _ => None,
                },
                None => None,
            };
            let (si, ti) = (idems(s), idems(t));
            let report = check_x_map(
                matrix,
                XStructure::WeakHopf(&s.hopf),
                si.as_deref(),
                XStructure::WeakHopf(&t.hopf),
                ti.as_deref(),
            )
            .map_err(e)?;
            Ok((report, json!({"rows": matrix.rows(), "cols": matrix.cols()})))
        }
        (Command::GroupoidAlgebra, Resolved::Groupoid(g)) => {
            let h = groupoid_algebra(g).map_err(e)?;
            let mut report = check_groupoid(g);
            report.extend_prefixed("weak_hopf", check_weak_hopf(&h));
            let idems: Vec<Value> = groupoid_idempotents(g)
                .iter()
                .map(|(x, v)| json!({"object": x, "idempotent": combination(h.labels(), v)}))
                .collect();
            let result = json!({
                "dim": h.dim(),
                "labels": h.labels(),
                "hopf": is_hopf(&h).map_err(e)?,
                "cocommutative": is_cocommutative(h.coalgebra()),
                "idempotents": idems,
            });
            Ok((report, result))
        }
        (Command::CheckWeakHopf, Resolved::WeakHopf(w)) => {
            let h = &w.hopf;
            let report = check_weak_hopf(h);
            let hopf = match h.antipode() {
                Some(_) if report.passed() => Value::Bool(is_hopf(h).map_err(e)?),
                _ => Value::Null,
            };
            let result = json!({
                "dim": h.dim(),
                "labels": h.labels(),
                "hopf": hopf,
                "cocommutative": is_cocommutative(h.coalgebra()),
                "commutative": h.algebra().is_commutative(),
            });
            Ok((report, result))
        }
        (Command::Counital, Resolved::WeakHopf(w)) => {
            let h = &w.hopf;
            let maps = counital_maps(h);
            let basis = |s: &whk_core::exact::Subspace| -> Vec<String> {
                s.basis().iter().map(|v| combination(h.labels(), &normalize_trailing(v))).collect()
            };
            let result = json!({
                "source": basis(&maps.source),
                "target": basis(&maps.target),
                "source_equals_target": maps.source == maps.target,
            });
            Ok((check_counital(h), result))
        }
        (Command::Grouplikes, Resolved::WeakHopf(w)) => {
            let h = &w.hopf;
            let set = enumerate_grouplikes(h).map_err(e)?;
            let mut check = Check::new("grouplike");
            for v in &set.elements {
                check.record(is_grouplike(h, v), || Witness::new([combination(h.labels(), v)]));
            }
            let mut report = Report::new();
            report.push(check);
            let result = json!({"count": set.elements.len(), "complete": set.complete, "elements": set.display()});
            Ok((report, result))
        }
        (Command::Gamma, Resolved::WeakHopf(w)) => gamma(ws, w, opts),
        (Command::Ideal, Resolved::WeakHopf(w)) => {
            let h = &w.hopf;
            let ideal = ideal_from_generators(h, &w.ideal_generators).map_err(e)?;
            let witness = is_hopf_ideal(h, &ideal).map_err(e)?;
            let result = json!({
                "generators": w.ideal_generators.iter().map(|v| combination(h.labels(), v)).collect::<Vec<_>>(),
                "dim": ideal.dim(),
                "basis": witness.display(h.labels()),
            });
            Ok((witness.report, result))
        }
        (Command::LocalUnits, Resolved::Algebra(a)) => {
            let (lu, rejected) =
                LocalUnitGroupoid::certify(a.algebra.clone(), a.idempotents.clone(), &a.local_units).map_err(e)?;
            let mut check = Check::new("local_unit");
            for (name, ..) in &a.local_units {
                check.record(!rejected.contains(name), || Witness::new([name.clone()]));
            }
            let mut report = Report::new();
            report.push(check);
            report.extend_prefixed("closure", local_unit_closure_check(&lu).map_err(e)?);
            let groupoid = match lu.as_groupoid() {
                Ok(g) => groupoid_summary(&g),
                Err(_) => Value::Null,
            };
            let result = json!({
                "certified": lu.units.iter().map(|u| u.name.clone()).collect::<Vec<_>>(),
                "rejected": rejected,
                "groupoid": groupoid,
            });
            Ok((report, result))
        }
        (Command::CheckModuleAlgebra, Resolved::GroupoidAction(a)) => module_algebra(&a.action),
        (Command::Decompose, Resolved::GroupoidAction(a)) => {
            let act = &a.action;
            let lin = linearize_action(act).map_err(e)?;
            let total = act.carrier().as_algebra().ok_or("the carrier is not an algebra")?.total().clone();
            let d = decompose_from_idempotents(&lin, &total, Some(groupoid_idempotents(act.groupoid())))
                .map_err(e)?;
            let comps: Vec<Value> = d
                .algebra
                .objects()
                .iter()
                .zip(d.algebra.components())
                .map(|(x, c)| json!({"object": x, "dim": c.dim(), "labels": c.labels()}))
                .collect();
            Ok((d.report, json!({"components": comps})))
        }
        (Command::InnerFaithful, Resolved::GroupoidAction(a)) => {
            let lin = linearize_action(&a.action).map_err(e)?;
            let res = inner_faithful(&lin).map_err(e)?;
            let labels = lin.hopf().labels();
            let basis = res.ideal.display(labels);
            let mut check = Check::new("inner_faithful");
            check.record(res.faithful, || Witness::new(basis.clone()));
            let mut report = Report::new();
            report.push(check);
            report.extend_prefixed("hopf_ideal", res.ideal.report.clone());
            let result = json!({
                "faithful": res.faithful,
                "annihilator_dim": res.annihilator.dim(),
                "hopf_ideal": basis,
            });
            Ok((report, result))
        }
        (Command::Smash, Resolved::GroupoidAction(a)) => {
            let base = a.base.as_deref().ok_or("the action carrier is not a decomposed weak Hopf algebra")?;
            let h = ws.weak_hopf(base).and_then(|w| w.decomposed.as_ref()).ok_or("missing decomposition")?;
            let sp = build_smash(h, &a.action).map_err(e)?;
            let mut report = Report::new();
            report.extend_prefixed("conditions", sp.conditions.clone());
            let mut idems = Vec::new();
            match &sp.hopf {
                Some(hopf) => {
                    report.extend_prefixed("weak_hopf", check_weak_hopf(hopf));
                    let (found, rep) = smash_base_idempotents(&sp).map_err(e)?;
                    report.extend_prefixed("base_idempotents", rep);
                    idems = found.iter().map(|(x, v)| json!({"name": x, "element": combination(sp.labels(), v)})).collect();
                }
                None => {
                    let mut c = Check::new("weak_hopf_structure").with_note("algebra only");
                    c.fail(Witness::new(["algebra_only"]));
                    report.push(c);
                }
            }
            let result = json!({
                "dim": sp.dim(),
                "labels": sp.labels(),
                "algebra_only": sp.algebra_only,
                "base_idempotents": idems,
            });
            Ok((report, result))
        }
        (Command::Der, Resolved::Algebra(a)) => {
            let space = derivation_space(&a.algebra);
            let report = check_bracket_closure(&a.algebra, &space);
            Ok((report, json!({"dim": space.dim(), "algebra_dim": a.algebra.dim()})))
        }
        (Command::Der, Resolved::XDecomp(x)) => {
            let act = der_x(&x.algebra).map_err(e)?;
            let mut report = check_algebroid(act.algebroid());
            append(&mut report, check_algebroid_action(&act).map_err(e)?);
            let comps: Vec<Value> = x
                .algebra
                .objects()
                .iter()
                .zip(act.algebroid().components())
                .map(|(o, l)| json!({"object": o, "dim": l.dim()}))
                .collect();
            Ok((report, json!({"components": comps})))
        }
        (Command::CheckLieAction, Resolved::LieAction(l)) => {
            let mut report = Report::new();
            report.extend_prefixed("algebroid", check_algebroid(l.action.algebroid()));
            report.extend_prefixed("action", check_algebroid_action(&l.action).map_err(e)?);
            let mut conjugated = 0;
            if let Some(name) = &l.groupoid_action {
                let ga = ws.groupoid_action(name).ok_or("missing groupoid action")?;
                let conj = conjugate_action(&ga.action, &l.action, l.lie_maps.as_deref()).map_err(e)?;
                report.extend_prefixed("conjugation", conj.report);
                conjugated = conj.table.len();
            }
            let dims: Vec<Value> = l
                .action
                .carrier()
                .objects()
                .iter()
                .zip(l.action.algebroid().components())
                .zip(l.action.carrier().components())
                .map(|((x, lie), a)| json!({"object": x, "lie_dim": lie.dim(), "algebra_dim": a.dim()}))
                .collect();
            Ok((report, json!({"components": dims, "conjugated_generators": conjugated})))
        }
        (Command::EnvelopeConsistency, Resolved::LieAction(l)) => {
            let name = l.groupoid_action.as_deref().ok_or("envelope consistency needs a `groupoid_action`")?;
            let ga = ws.groupoid_action(name).ok_or("missing groupoid action")?;
            let report = bounded_envelope_consistency(&l.action, &ga.action, opts.degree).map_err(e)?;
            Ok((report, json!({"degree": opts.degree})))
        }
        _ => Err("the command does not apply to this block".into()),
    }
}

fn append(report: &mut Report, other: Report) {
    for c in other.checks {
        report.push(c);
    }
}

fn gamma(ws: &Workspace, w: &crate::resolve::WeakHopfObject, opts: &Options) -> Out {
    let h = &w.hopf;
    let gamma = gamma_groupoid(h).map_err(e)?;
    let mut report = Report::new();
    report.extend_prefixed("groupoid", check_groupoid(&gamma));
    append(&mut report, check_gamma_dichotomy(h).map_err(e)?);
    let mut agree = Check::new("objects_agree");
    match gamma_objects_via_idempotents(h, opts.max_idempotents) {
        Ok(mut via) => {
            via.sort();
            let set = enumerate_grouplikes(h).map_err(e)?;
            let maps = counital_maps(h);
            let mut objects = Vec::new();
            for v in set.elements {
                if maps.target.contains(&v).map_err(e)? {
                    objects.push(v);
                }
            }
            objects.sort();
            agree.record(via == objects, || {
                let mut wit = Witness::new(["objects"]);
                for v in &via {
                    wit = wit.value("via_idempotents", v.clone());
                }
                for v in &objects {
                    wit = wit.value("grouplike_objects", v.clone());
                }
                wit
            });
        }
        Err(err) => agree = agree.with_note(&format!("skipped: {err}")),
    }
    report.push(agree);
    if let Some(Resolved::Groupoid(src)) = w.groupoid.as_ref().and_then(|g| ws.get(g)) {
        let mut same = Check::new("matches_source");
        same.record(same_by_morphism_labels(src, &gamma), || {
            Witness::new([w.groupoid.clone().unwrap_or_default()])
        });
        report.push(same);
    }
    Ok((report, groupoid_summary(&gamma)))
}

fn module_algebra(act: &whk_core::module_alg::GroupoidAction) -> Out {
    let mut report = Report::new();
    report.extend_prefixed("module", check_groupoid_module(act));
    report.extend_prefixed("module_algebra", check_groupoid_module_algebra(act).map_err(e)?);
    let mut round = Check::new("functor_round_trip");
    match action_to_functor(act) {
        Ok(f) => {
            let back = functor_to_action(&f).map_err(e)?;
            round.record(&back == act, || Witness::new(["action"]));
        }
        Err(ModuleError::Certification { morphism, condition }) => {
            round.fail(Witness::new([morphism, condition]));
        }
        Err(err) => return Err(err.to_string()),
    }
    report.push(round);
    let lin = linearize_action(act).map_err(e)?;
    let total = act.carrier().as_algebra().ok_or("the carrier is not an algebra")?.total().clone();
    report.extend_prefixed("linearized", check_h_module_algebra(&lin, &total).map_err(e)?);
    let g = act.groupoid();
    let result = json!({
        "objects": g.objects(),
        "morphisms": g.num_morphisms(),
        "carrier_dims": act.carrier().dims(),
    });
    Ok((report, result))
}

fn groupoid_summary(g: &FiniteGroupoid) -> Value {
    let morphisms: Vec<Value> = (0..g.num_morphisms())
        .map(|m| {
            json!({
                "label": g.label(m),
                "source": g.objects()[g.source(m)],
                "target": g.objects()[g.target(m)],
                "inverse": g.label(g.inverse(m)),
            })
        })
        .collect();
    json!({"objects": g.objects(), "morphisms": morphisms})
}

/// Rows of exact entries as strings, e.g. `["1", "-1/2"]`.
pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_scalar(x))).collect()))
            .collect(),
    )
}
