//! The JSON run report and the helpers that fill it.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use latinv::{Clause, Codim, EngineTrace, Error};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    /// File path, or `null` for inline values.
    pub path: Option<String>,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub orbit_size: usize,
    pub selected: usize,
    pub join_codim: Codim,
    pub meet_codim: Codim,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSummary {
    pub label: String,
    pub start_codim: Codim,
    pub steps: Vec<StepSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub result: Value,
    pub clauses: Vec<Clause>,
    pub trace_summary: Vec<TraceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
}

/// A failed run: the library error plus an optional structured witness.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub witness: Option<Value>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, witness: None }
    }
}

pub fn exit_status(e: &Error) -> (&'static str, i32) {
    match e {
        Error::PreconditionViolated(_) | Error::NotNormal | Error::ArityMismatch { .. } => ("precondition", 1),
        Error::Parse(_) | Error::Variable(_) | Error::NotAGroup { .. } | Error::DuplicatePoints(..) => ("parse", 2),
        Error::CapExceeded { .. } => ("cap", 3),
        Error::InvariantViolation(_) | Error::Undecided(_) => ("invariant", 4),
    }
}

/// Collects what a command read, with digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, name: &str, path: &Path) -> Result<String, Error> {
        let bytes = fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.digests.push(InputDigest {
            name: name.into(),
            path: Some(path.display().to_string()),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Error::Parse(format!("{}: not UTF-8", path.display())))
    }

    pub fn inline(&mut self, name: &str, value: &str) {
        self.digests.push(InputDigest { name: name.into(), path: None, sha256: hex::encode(Sha256::digest(value)) });
    }

    /// An id list given inline as a JSON array, or as a path to a file
    /// holding one.
    pub fn id_list(&mut self, name: &str, value: &str) -> Result<Vec<usize>, Error> {
        let text = if value.trim_start().starts_with('[') {
            self.inline(name, value);
            value.to_string()
        } else {
            self.read(name, Path::new(value))?
        };
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{name}: {e}")))
    }
}

pub fn summarize<E>(label: impl Into<String>, trace: &EngineTrace<E>) -> TraceSummary {
    TraceSummary {
        label: label.into(),
        start_codim: trace.start_codim.clone(),
        steps: trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepSummary {
                step: i + 1,
                orbit_size: s.orbit_size,
                selected: s.selected.len(),
                join_codim: s.join_codim.clone(),
                meet_codim: s.meet_codim.clone(),
            })
            .collect(),
    }
}

/// How `G_s <= G_{s-1}` reads on the serialized id lists of a trace.
#[derive(Clone, Copy, Debug)]
pub enum Order {
    /// Elements are removed sets: smaller elements remove more.
    Removed,
    /// Elements are subgroups under inclusion.
    Included,
    /// Elements are subgroups under reverse inclusion.
    Reversed,
}

/// The per-step trace inequalities, recomputed from the serialized trace.
pub fn trace_clauses(label: &str, trace: &EngineTrace<Vec<usize>>, order: Order) -> Vec<Clause> {
    let mut bad = Vec::new();
    for (s, step) in trace.steps.iter().enumerate() {
        let prev = trace.input_codim(s);
        if !matches!(step.meet_codim.le_f_iterate(prev, 1), Ok(true)) {
            bad.push(format!("step {}: codim N_s > f(codim N_(s-1))", s + 1));
        }
        if !step.join_codim.le(prev) {
            bad.push(format!("step {}: codim G_s > codim N_(s-1)", s + 1));
        }
        if s > 0 {
            let cur: BTreeSet<usize> = step.join.iter().copied().collect();
            let last: BTreeSet<usize> = trace.steps[s - 1].join.iter().copied().collect();
            let below = match order {
                Order::Removed => last.is_subset(&cur),
                Order::Included => cur.is_subset(&last),
                Order::Reversed => last.is_subset(&cur),
            };
            if !below {
                bad.push(format!("step {}: G_s not below G_(s-1)", s + 1));
            }
        }
    }
    vec![Clause::with_detail(
        "trace_inequalities",
        bad.is_empty(),
        format!("{label}: {}", if bad.is_empty() { "all steps hold".to_string() } else { bad.join("; ") }),
    )]
}
