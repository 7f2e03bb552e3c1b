//! Verification reports. Mathematical failures are data, not errors.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

/// How strongly an identity was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Exact equality in the module itself (modulo its relations).
    Module,
    /// Equality only after applying the anchor, as derivations.
    Anchor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Certification>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, witness: None, level: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Fail, witness: Some(witness.into()), level: None }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skipped(reason.into()), witness: None, level: None }
    }

    pub fn at(mut self, level: Certification) -> Self {
        self.level = Some(level);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), ..Self::default() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Adds a pass/fail check; the witness closure runs only on failure.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.push(Check::pass(name));
        } else {
            self.push(Check::fail(name, witness()));
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn count(&self, status: &Status) -> usize {
        self.checks.iter().filter(|c| &c.status == status).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.count(&Status::Pass);
        let failed = self.failures().count();
        let skipped = self.checks.len() - passed - failed;
        writeln!(
            f,
            "{}: {} ({passed} passed, {failed} failed, {skipped} skipped)",
            self.title,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for c in self.failures() {
            writeln!(f, "  FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""))?;
        }
        for c in &self.checks {
            if let Status::Skipped(reason) = &c.status {
                writeln!(f, "  skipped {}: {reason}", c.name)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
