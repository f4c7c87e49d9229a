use serde::{Deserialize, Serialize};
use tateforge::invariants::{
    BigradedTable, GolodCheck, Outcome, TheoremReport, TorIndependence, TruncatedSeries, Verdict,
};
use tateforge::tate::DeviationTable;

use crate::input::InputDoc;

pub const SCHEMA: &str = "tateforge-report/1";
pub const DETERMINISM: &str = "deterministic: no randomness, output does not depend on the thread count";

/// A ring of the input: its label (`R`, `S1`, `S2`, `S`) and ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingLabel {
    pub name: String,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommandResult {
    Deviations {
        ring: RingLabel,
        table: DeviationTable,
        totals: Vec<u64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        flags: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exhausted: Option<String>,
    },
    Poincare {
        ring: RingLabel,
        betti_route: TruncatedSeries,
        closure_route: TruncatedSeries,
        agree: bool,
        series: String,
    },
    Betti {
        ring: RingLabel,
        table: BigradedTable,
    },
    Tor {
        table: BigradedTable,
    },
    TorIndependence(TorIndependence),
    Koszul {
        ring: RingLabel,
        verdict: Verdict,
    },
    Golod {
        map: String,
        check: GolodCheck,
    },
    Classify {
        map: String,
        mode: String,
        verdict: Verdict,
    },
    Theorem(TheoremReport),
}

impl CommandResult {
    /// A property the engine checks did not hold.
    pub fn failed(&self) -> bool {
        match self {
            CommandResult::Poincare { agree, .. } => !agree,
            CommandResult::Theorem(t) => t.outcome == Outcome::Failed,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema: String,
    pub command: String,
    pub input: Option<InputDoc>,
    pub determinism: String,
    pub results: Vec<CommandResult>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: Option<InputDoc>) -> Self {
        Report {
            tool: "tateforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA.into(),
            command: command.into(),
            input,
            determinism: DETERMINISM.into(),
            results: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.results.iter().any(CommandResult::failed)
    }
}
