//! The JSON verification report emitted on stdout.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config_digest: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: String,
    pub residual_term_count: usize,
    /// Cut weight the verdict holds above, when the check truncates.
    pub cut: Option<String>,
    pub details: String,
}

impl CheckResult {
    pub fn pass(name: &str, details: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            verdict: "pass".into(),
            residual_term_count: 0,
            cut: None,
            details: details.into(),
        }
    }

    pub fn fail(name: &str, residual_terms: usize, details: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            verdict: "fail".into(),
            residual_term_count: residual_terms,
            cut: None,
            details: details.into(),
        }
    }

    pub fn with_cut(mut self, cut: Option<String>) -> Self {
        self.cut = cut;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
