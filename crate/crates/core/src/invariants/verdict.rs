use std::fmt;

use serde::{Deserialize, Serialize};

use crate::window::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    CertifiedYes,
    CertifiedNo,
    YesUpToWindow,
    NoWithWitness,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::CertifiedYes => "certified-yes",
            VerdictStatus::CertifiedNo => "certified-no",
            VerdictStatus::YesUpToWindow => "yes-up-to-window",
            VerdictStatus::NoWithWitness => "no-with-witness",
        })
    }
}

impl VerdictStatus {
    pub fn is_yes(self) -> bool {
        matches!(self, VerdictStatus::CertifiedYes | VerdictStatus::YesUpToWindow)
    }

    pub fn is_certified(self) -> bool {
        matches!(self, VerdictStatus::CertifiedYes | VerdictStatus::CertifiedNo)
    }
}

/// Evidence attached to a negative answer or a failed comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A nonzero (or mismatching) entry of a bigraded table.
    Bidegree {
        hdeg: u32,
        ideg: u32,
        #[serde(with = "crate::window::wide_int")]
        expected: i128,
        #[serde(with = "crate::window::wide_int")]
        actual: i128,
    },
    /// The first mismatching series coefficient.
    Coefficient {
        index: usize,
        #[serde(with = "crate::window::wide_int")]
        expected: i128,
        #[serde(with = "crate::window::wide_int")]
        actual: i128,
    },
    /// An explicit element, such as a polynomial or a variable.
    Element { degree: u32, description: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub window: Window,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(status: VerdictStatus, window: Window) -> Self {
        Verdict { status, witness: None, window, notes: Vec::new() }
    }

    pub fn with_witness(status: VerdictStatus, witness: Witness, window: Window) -> Self {
        Verdict { status, witness: Some(witness), window, notes: Vec::new() }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status.is_yes()
    }
}

/// One row of a comparison: a key (bidegree or coefficient index) and one
/// value per column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub key: String,
    #[serde(with = "crate::window::wide_int::vec")]
    pub values: Vec<i128>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        ComparisonTable {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, values: Vec<i128>, ok: bool) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(ComparisonRow { key: key.into(), values, ok });
    }

    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Passed,
    Failed,
    /// A hypothesis did not hold, so the check was not run.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub window: Window,
    pub outcome: Outcome,
    pub verdict: Option<Verdict>,
    pub tables: Vec<ComparisonTable>,
    pub first_failure: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, window: Window) -> Self {
        CheckRecord {
            name: name.into(),
            window,
            outcome: Outcome::Passed,
            verdict: None,
            tables: Vec::new(),
            first_failure: None,
            notes: Vec::new(),
        }
    }

    /// Marks the record failed at `witness` unless it already failed earlier.
    pub fn fail(&mut self, witness: Witness) {
        self.outcome = Outcome::Failed;
        if self.first_failure.is_none() {
            self.first_failure = Some(witness);
        }
    }

    pub fn skip(mut self, note: impl Into<String>) -> Self {
        self.outcome = Outcome::Skipped;
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Passed
    }
}

/// The ideals a report was run on, rendered in the input variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairInputs {
    pub field: String,
    pub vars: Vec<String>,
    pub base: Vec<String>,
    pub i1: Vec<String>,
    pub i2: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub inputs: PairInputs,
    pub window: Window,
    pub outcome: Outcome,
    /// Hypothesis checks, run before the main checks.
    pub hypotheses: Vec<CheckRecord>,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn new(theorem: impl Into<String>, inputs: PairInputs, window: Window) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            inputs,
            window,
            outcome: Outcome::Passed,
            hypotheses: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Adds a hypothesis record; a failed one marks the report skipped.
    pub fn hypothesis(&mut self, record: CheckRecord) -> bool {
        let ok = record.outcome != Outcome::Failed;
        if !ok {
            self.outcome = Outcome::Skipped;
        }
        self.hypotheses.push(record);
        ok
    }

    pub fn check(&mut self, record: CheckRecord) {
        if record.outcome == Outcome::Failed && self.outcome == Outcome::Passed {
            self.outcome = Outcome::Failed;
        }
        self.checks.push(record);
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Passed
    }
}
