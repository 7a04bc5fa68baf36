//! Witness-bearing check reports.
//!
//! A [`Report`] is an ordered list of named [`Check`]s. Each check counts how many instances it
//! evaluated and keeps every failure as a [`Witness`] in a sorted set, so reports assembled from
//! parallel loops are identical regardless of scheduling.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::exact::Scalar;

/// One concrete failure: the basis tuple it was found on, the nonzero residual (as sparse
/// label/coefficient pairs) and optional named dense vectors for context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub tuple: Vec<String>,
    pub residual: Vec<(String, Scalar)>,
    pub values: Vec<(String, Vec<Scalar>)>,
}

impl Witness {
    pub fn new<S: Into<String>>(tuple: impl IntoIterator<Item = S>) -> Self {
        Witness {
            tuple: tuple.into_iter().map(Into::into).collect(),
            residual: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Attaches a dense residual, keeping only nonzero coordinates under their labels.
    pub fn residual(mut self, labels: &[String], residual: &[Scalar]) -> Self {
        self.residual = labels
            .iter()
            .zip(residual)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.clone(), c.clone()))
            .collect();
        self
    }

    /// Attaches an already sparse residual.
    pub fn sparse_residual(mut self, entries: Vec<(String, Scalar)>) -> Self {
        self.residual = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self
    }

    pub fn value(mut self, name: &str, v: Vec<Scalar>) -> Self {
        self.values.push((name.to_string(), v));
        self
    }

    pub fn named(&self, name: &str) -> Option<&[Scalar]> {
        self.values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub failures: BTreeSet<Witness>,
    /// Free-form remark, e.g. why a check was vacuous.
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            evaluated: 0,
            failures: BTreeSet::new(),
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Counts one evaluation; on failure stores the witness produced by `witness`.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.evaluated += 1;
        if !ok {
            self.failures.insert(witness());
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.evaluated += 1;
        self.failures.insert(witness);
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    /// Combines partial results of the same check (e.g. from parallel chunks).
    pub fn absorb(&mut self, other: Check) {
        self.evaluated += other.evaluated;
        self.failures.extend(other.failures);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends all checks of `other`, prefixing their names with `prefix/` when nonempty.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}/{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when the named check exists and passed.
    pub fn check_passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(Check::passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Human-readable linear combination such as `g2 - e2` or `2*a + 1/3*b`; zero prints as `0`.
/// Positive terms come first, each group in basis order.
pub fn combination(labels: &[String], v: &[Scalar]) -> String {
    use num_traits::{One, Signed};
    let mut terms: Vec<(&String, &Scalar)> =
        labels.iter().zip(v).filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by_key(|(_, c)| c.is_negative());
    let mut out = String::new();
    for (l, c) in terms {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&crate::exact::format_scalar(&magnitude));
            out.push('*');
        }
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
