//! The `whk` command-line checker: definition-file parsing, command dispatch and report output.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 on operational errors.

pub mod commands;
pub mod error;
pub mod format;
pub mod render;
pub mod resolve;

use std::time::Instant;

use serde_json::{json, Map};

pub use commands::{Command, Options, Outcome};
pub use error::CliError;
pub use render::Format;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: String,
    /// Shown in the report exactly as given.
    pub file: String,
    pub format: Format,
    pub options: Options,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

/// Parses and resolves a definition file.
pub fn load(text: &str) -> Result<resolve::Workspace, CliError> {
    let file = format::parse_str(text)?;
    resolve::resolve(file, text)
}

/// Reads `inv.file` from disk and runs the command.
pub fn run(inv: &Invocation) -> Output {
    match std::fs::read_to_string(&inv.file) {
        Ok(text) => run_text(inv, &text),
        Err(e) => finish(inv, Err(CliError::Io { path: inv.file.clone(), message: e.to_string() }), None),
    }
}

/// Runs the command on file contents already in memory.
pub fn run_text(inv: &Invocation, text: &str) -> Output {
    let start = Instant::now();
    let outcomes = execute(inv, text);
    let elapsed = inv.timing.then(|| start.elapsed().as_millis());
    finish(inv, outcomes, elapsed)
}

fn execute(inv: &Invocation, text: &str) -> Result<Vec<Result<Outcome, CliError>>, CliError> {
    let cmd = Command::parse(&inv.command)?;
    let ws = load(text)?;
    if cmd == Command::Report {
        let plan = commands::report_plan(&ws);
        let plan: Vec<_> = match &inv.options.target {
            Some(t) => {
                if ws.get(t).is_none() {
                    return Err(CliError::UnknownTarget(t.clone()));
                }
                plan.into_iter().filter(|(_, b)| b == t).collect()
            }
            None => plan,
        };
        return Ok(plan.iter().map(|(c, b)| commands::run_on(&ws, *c, b, &inv.options)).collect());
    }
    let target = commands::select_target(&ws, cmd, &inv.options)?;
    Ok(vec![Ok(commands::run_on(&ws, cmd, &target, &inv.options)?)])
}

fn finish(inv: &Invocation, outcomes: Result<Vec<Result<Outcome, CliError>>, CliError>, timing: Option<u128>) -> Output {
    let mut body = Map::new();
    let (code, list) = match outcomes {
        Err(err) => {
            body.insert("status".into(), json!("error"));
            body.insert("error".into(), render::error_value(&err));
            (EXIT_ERROR, Vec::new())
        }
        Ok(list) => {
            let errored = list.iter().any(|o| o.is_err());
            let failed = list.iter().any(|o| o.as_ref().is_ok_and(|o| !o.report.passed()));
            let (code, status) = if errored {
                (EXIT_ERROR, "error")
            } else if failed {
                (EXIT_FAIL, "fail")
            } else {
                (EXIT_PASS, "pass")
            };
            body.insert("status".into(), json!(status));
            if inv.command == Command::Report.name() {
                let runs = list
                    .iter()
                    .map(|o| match o {
                        Ok(o) => render::outcome_value(o),
                        Err(err) => json!({"status": "error", "error": render::error_value(err)}),
                    })
                    .collect::<Vec<_>>();
                body.insert("runs".into(), json!(runs));
            } else if let Some(Ok(o)) = list.first() {
                for (k, v) in render::outcome_value(o).as_object().expect("object") {
                    body.insert(k.clone(), v.clone());
                }
            }
            (code, list)
        }
    };
    let doc = render::document(&inv.command, &inv.file, body, timing);
    let stdout = match inv.format {
        Format::Json => render::to_json(&doc),
        Format::Text => render::to_text(&doc, &list),
    };
    Output { stdout, code }
}
