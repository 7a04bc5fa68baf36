//! JSON and text renderings of outcomes. Both list the same checks, statuses and witnesses.

use serde_json::{json, Map, Value};
use whk_core::exact::format_scalar;
use whk_core::report::{Check, Report, Witness};

use crate::commands::Outcome;
use crate::error::CliError;
use crate::format::scalar_to_value;

/// Report schema version.
pub const SCHEMA: u64 = 1;

/// At most this many witnesses are printed per check; the total is always reported.
pub const WITNESS_CAP: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn status(report: &Report) -> &'static str {
    if report.passed() {
        "pass"
    } else {
        "fail"
    }
}

fn witness_value(w: &Witness) -> Value {
    json!({
        "tuple": w.tuple,
        "residual": w.residual.iter().map(|(l, c)| json!([l, scalar_to_value(c)])).collect::<Vec<_>>(),
        "values": w.values.iter().map(|(n, v)| json!([n, v.iter().map(scalar_to_value).collect::<Vec<_>>()])).collect::<Vec<_>>(),
    })
}

fn check_value(c: &Check) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(c.name));
    m.insert("status".into(), json!(if c.passed() { "pass" } else { "fail" }));
    m.insert("evaluated".into(), json!(c.evaluated));
    m.insert("failures".into(), Value::Array(c.failures.iter().take(WITNESS_CAP).map(witness_value).collect()));
    m.insert("failures_total".into(), json!(c.failures.len()));
    if let Some(n) = &c.note {
        m.insert("note".into(), json!(n));
    }
    Value::Object(m)
}

pub fn outcome_value(o: &Outcome) -> Value {
    json!({
        "command": o.command.name(),
        "target": o.target,
        "status": status(&o.report),
        "checks": o.report.checks.iter().map(check_value).collect::<Vec<_>>(),
        "result": o.result,
    })
}

pub fn error_value(err: &CliError) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(err.kind()));
    m.insert("message".into(), json!(err.to_string()));
    if let Some((line, column)) = err.position() {
        m.insert("line".into(), json!(line));
        m.insert("column".into(), json!(column));
    }
    Value::Object(m)
}

/// Adds the envelope fields shared by every document.
pub fn document(command: &str, file: &str, mut body: Map<String, Value>, timing_ms: Option<u128>) -> Value {
    body.insert("schema".into(), json!(SCHEMA));
    body.insert("command".into(), json!(command));
    body.insert("file".into(), json!(file));
    if let Some(t) = timing_ms {
        body.insert("timing_ms".into(), json!(t));
    }
    Value::Object(body)
}

pub fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("values serialize");
    s.push('\n');
    s
}

fn witness_text(w: &Witness) -> String {
    let mut s = format!("({})", w.tuple.join(", "));
    if !w.residual.is_empty() {
        let parts: Vec<String> = w.residual.iter().map(|(l, c)| format!("{l}: {}", format_scalar(c))).collect();
        s.push_str(&format!(" residual {{{}}}", parts.join(", ")));
    }
    for (n, v) in &w.values {
        let parts: Vec<String> = v.iter().map(format_scalar).collect();
        s.push_str(&format!(" {n} = [{}]", parts.join(", ")));
    }
    s
}

fn checks_text(out: &mut String, report: &Report, indent: &str) {
    for c in &report.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{indent}{tag} {} ({} evaluated", c.name, c.evaluated));
        if !c.passed() {
            out.push_str(&format!(", {} failures", c.failures.len()));
        }
        out.push(')');
        if let Some(n) = &c.note {
            out.push_str(&format!(" [{n}]"));
        }
        out.push('\n');
        for w in c.failures.iter().take(WITNESS_CAP) {
            out.push_str(&format!("{indent}  witness {}\n", witness_text(w)));
        }
        if c.failures.len() > WITNESS_CAP {
            out.push_str(&format!("{indent}  ... {} more\n", c.failures.len() - WITNESS_CAP));
        }
    }
}

/// Text rendering of a JSON document produced by this module.
pub fn to_text(doc: &Value, outcomes: &[Result<Outcome, CliError>]) -> String {
    let field = |k: &str| doc.get(k).and_then(Value::as_str).unwrap_or("").to_string();
    let mut out = format!("{} {}\n", field("command"), field("file"));
    if let Some(err) = doc.get("error") {
        out.push_str(&format!("ERROR {}\n", err["message"].as_str().unwrap_or("")));
    }
    for o in outcomes {
        match o {
            Ok(o) => {
                out.push_str(&format!("== {} {}\n", o.command.name(), o.target));
                checks_text(&mut out, &o.report, "");
                out.push_str(&format!("result {}\n", serde_json::to_string(&o.result).expect("values serialize")));
                out.push_str(&format!("status {}\n", status(&o.report).to_uppercase()));
            }
            Err(err) => out.push_str(&format!("ERROR {err}\n")),
        }
    }
    if let Some(t) = doc.get("timing_ms") {
        out.push_str(&format!("timing_ms {t}\n"));
    }
    out.push_str(&format!("STATUS {}\n", field("status").to_uppercase()));
    out
}
