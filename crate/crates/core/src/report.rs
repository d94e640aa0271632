//! Outcome records shared by every property check.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        })
    }
}

/// Result of running one property over a batch of cases.
///
/// The verdict is derived from the counterexamples, so a failing report
/// always carries at least one and a passing one carries none.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    pub cases: u64,
    pub counterexamples: Vec<String>,
    pub witnesses: Vec<String>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Pass,
            cases: 0,
            counterexamples: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    /// Records one case; `counterexample` is rendered only on failure.
    pub fn check(&mut self, holds: bool, counterexample: impl FnOnce() -> String) {
        self.cases += 1;
        if !holds {
            self.counterexamples.push(counterexample());
            self.verdict = Verdict::Fail;
        }
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        if self.counterexamples.is_empty() {
            self.verdict = Verdict::Skipped;
        }
        self.witnesses.push(reason.into());
    }

    /// Folds another report's cases and findings into this one, prefixing
    /// each entry with the sub-property name.
    pub fn absorb(&mut self, other: PropertyReport) {
        self.cases += other.cases;
        let tag = other.property;
        self.counterexamples.extend(other.counterexamples.into_iter().map(|c| format!("{tag}: {c}")));
        self.witnesses.extend(other.witnesses.into_iter().map(|w| format!("{tag}: {w}")));
        if !self.counterexamples.is_empty() {
            self.verdict = Verdict::Fail;
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}
