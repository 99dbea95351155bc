//! Pass/fail records shared by every verification routine.

use serde::{Deserialize, Serialize};

/// How much of an input space a check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Full,
    Sampled { count: u64, seed: u64 },
}

impl Mode {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Mode::Full => None,
            Mode::Sampled { seed, .. } => Some(*seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Element indices (or other integers) demonstrating a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, witness: None, detail: None }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<u64>) -> Self {
        Check { name: name.into(), passed: false, witness: Some(witness), detail: None }
    }

    /// Passes iff `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<Vec<u64>>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Number of tuples examined by the dominant loop.
    pub examined: u64,
    /// False when a time budget cut the run short.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        Report { checks, examined: 0, complete: true, seed: None }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.complete && self.all_passed()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.checks.extend(other.checks);
        self.examined += other.examined;
        self.complete &= other.complete;
        self.seed = self.seed.or(other.seed);
        self
    }
}
