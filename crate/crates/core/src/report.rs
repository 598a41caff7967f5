//! Verdicts shared by the axiom checkers.

use serde::Serialize;

/// Outcome of checking one identity over a finite set of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub checked: usize,
    /// Instances that could not be evaluated, e.g. because a product left the truncation.
    pub skipped: usize,
    /// Labels of the first failing instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

impl Default for Verdict {
    fn default() -> Self {
        Verdict::new()
    }
}

impl Verdict {
    pub fn new() -> Self {
        Verdict { holds: true, checked: 0, skipped: 0, counterexample: None }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, witness: Vec<String>) {
        self.checked += 1;
        self.holds = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(witness);
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        if ok {
            self.pass();
        } else {
            self.fail(witness());
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn merge(&mut self, other: Verdict) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        if !other.holds {
            self.holds = false;
            if self.counterexample.is_none() {
                self.counterexample = other.counterexample;
            }
        }
    }

    pub fn failed(witness: Vec<String>) -> Self {
        let mut v = Verdict::new();
        v.fail(witness);
        v
    }
}
