//! Machine-readable results of the seeded check harnesses.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked statement: how many instances were examined and which of
/// them failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: Status,
    pub instances: usize,
    pub counterexamples: Vec<Value>,
}

/// At most this many counterexamples are kept per check.
pub const MAX_COUNTEREXAMPLES: usize = 5;

impl Check {
    pub fn new(id: &str, description: &str) -> Self {
        Check {
            id: id.to_string(),
            description: description.to_string(),
            status: Status::Pass,
            instances: 0,
            counterexamples: Vec::new(),
        }
    }

    /// Records one instance.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.status = Status::Fail;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub theory: String,
    pub d: u64,
    pub seed: u64,
    pub samples: usize,
    pub all_pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(
        schema: &'static str,
        theory: &str,
        d: u64,
        seed: u64,
        samples: usize,
        checks: Vec<Check>,
    ) -> Self {
        Report {
            schema,
            theory: theory.to_string(),
            d,
            seed,
            samples,
            all_pass: checks.iter().all(Check::passed),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (d = {}, seed {}, {} samples)\n",
            self.theory, self.d, self.seed, self.samples
        );
        for c in &self.checks {
            let st = if c.passed() { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "  [{st}] {:>4}  {} ({} instances)\n",
                c.id, c.description, c.instances
            ));
            for ce in &c.counterexamples {
                out.push_str(&format!("         counterexample: {ce}\n"));
            }
        }
        out.push_str(if self.all_pass {
            "all checks pass\n"
        } else {
            "some checks FAIL\n"
        });
        out
    }
}
