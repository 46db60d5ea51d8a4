//! Structured verification output: suites emit a `Report` of checks, each
//! carrying the provenance of its expected value.

use serde::{Deserialize, Serialize};

/// Where an expected value comes from: a value stated in the literature,
/// an exactly computable quantity, or an independent numerical oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Literature,
    Exact,
    Oracle,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: Provenance,
}

impl Check {
    /// `pass` iff `|expected - observed| <= tolerance`.
    pub fn close(
        id: &str,
        description: &str,
        expected: f64,
        observed: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Check {
        Check {
            id: id.into(),
            description: description.into(),
            expected,
            observed,
            tolerance,
            pass: (expected - observed).abs() <= tolerance,
            provenance,
        }
    }

    /// `pass` iff `observed <= bound + tolerance` (one-sided predicate).
    pub fn upper_bound(
        id: &str,
        description: &str,
        bound: f64,
        observed: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Check {
        Check {
            id: id.into(),
            description: description.into(),
            expected: bound,
            observed,
            tolerance,
            pass: observed <= bound + tolerance,
            provenance,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Environment {
    pub seed: u64,
    pub max_dim: usize,
    /// Populated only on request so that reports stay bit-identical across
    /// runs with the same seed and flags.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<Check>,
    pub environment: Environment,
}

impl Report {
    pub fn new(suite: &str, seed: u64) -> Report {
        Report {
            schema: 1,
            suite: suite.into(),
            checks: Vec::new(),
            environment: Environment { seed, max_dim: crate::MAX_DIM, timestamp: None },
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_predicates() {
        let c = Check::close("a", "close", 1.0, 1.0 + 1e-9, 1e-8, Provenance::Exact);
        assert!(c.pass);
        let c = Check::close("b", "far", 1.0, 1.1, 1e-8, Provenance::Exact);
        assert!(!c.pass);
        let c = Check::upper_bound("c", "bound", 1.0, 0.5, 0.0, Provenance::Literature);
        assert!(c.pass);
    }

    #[test]
    fn json_is_stable_and_tagged() {
        let mut r = Report::new("demo", 7);
        r.push(Check::close("x", "d", 0.0, 0.0, 0.0, Provenance::Oracle));
        let s1 = r.to_json();
        let s2 = r.to_json();
        assert_eq!(s1, s2);
        assert!(s1.contains("\"schema\": 1"));
        assert!(s1.contains("\"oracle\""));
        assert!(!s1.contains("timestamp"));
    }
}
