//! Machine-readable check reports.

use serde::Serialize;

/// The first coefficient at which a checked identity fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// 1-based node.
    pub node: usize,
    /// `"+"` (series in z) or `"-"` (series in 1/z), or a short label.
    pub side: String,
    /// Exponent of the expansion variable; 0 for scalar identities.
    pub exponent: i64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub lweight: String,
    pub order: usize,
    pub pass: bool,
    pub first_failure: Option<Failure>,
}

impl CheckReport {
    pub fn new(check: &str, cartan_type: String, rank: usize, lweight: String, order: usize) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            cartan_type,
            rank,
            lweight,
            order,
            pass: true,
            first_failure: None,
        }
    }

    /// Records a failure; only the first one is kept.
    pub fn fail(&mut self, failure: Failure) {
        self.pass = false;
        if self.first_failure.is_none() {
            self.first_failure = Some(failure);
        }
    }
}

/// A batch of checks run over a catalog.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub order: usize,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn from_checks(suite: &str, order: usize, checks: Vec<CheckReport>) -> SuiteReport {
        let passed = checks.iter().filter(|c| c.pass).count();
        SuiteReport {
            suite: suite.to_string(),
            order,
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            pass: passed == checks.len(),
            checks,
        }
    }
}
