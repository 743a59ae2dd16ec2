//! Named post-condition checks attached to run results.

use std::fmt::Display;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Clause {
    pub fn new(name: &'static str, passed: bool) -> Self {
        Clause { name, passed, detail: None }
    }

    pub fn with_detail(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Clause { name, passed, detail: Some(detail.into()) }
    }
}

/// `InvariantViolation` naming the first failed clause, if any.
pub fn ensure_all(clauses: &[Clause]) -> Result<()> {
    match clauses.iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(c) => Err(Error::InvariantViolation(match &c.detail {
            Some(d) => format!("{}: {d}", c.name),
            None => c.name.to_string(),
        })),
    }
}

/// Serializes a value through its `Display` form; used for big integers.
pub(crate) fn as_string<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}
