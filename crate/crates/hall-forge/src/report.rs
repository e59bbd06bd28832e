//! Machine-readable run reports.
//!
//! A run produces one [`CheckRecord`] per requested check and a [`RunReport`]
//! wrapping them with summary counts.  Reports serialize to JSON and are
//! deterministic for a fixed configuration; elapsed times are the only
//! nondeterministic field and can be stripped for byte-stable output.

use serde::{Deserialize, Serialize};

// ============================ Status values ============================

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The identity held exactly.
    Pass,
    /// The two sides differ; the record carries the offending classes.
    Fail,
    /// A precondition (enumeration cap, scenario kind, coefficient mode) was
    /// not met; the reason is recorded and the run is not considered failed.
    Skipped,
    /// The computation could not settle the question within its budget
    /// (e.g. an orbit walk that neither closed nor left the positive cone).
    Undecided,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Undecided => "undecided",
        }
    }
}

// ============================ Per-check record ============================

/// Result of one check on one scenario.  `lhs_minus_rhs_support` lists up to
/// [`MAX_SUPPORT`] basis classes where the two sides of a failed identity
/// differ, with the differing coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub scenario: String,
    pub truncation: Vec<usize>,
    pub q_mode: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lhs_minus_rhs_support: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Maximum number of offending classes recorded for a failed check.
pub const MAX_SUPPORT: usize = 10;

impl CheckRecord {
    /// A fresh record with the given identity fields and no outcome yet.
    pub fn new(check: &str, scenario: &str, truncation: &[usize], q_mode: &str) -> Self {
        CheckRecord {
            check: check.to_string(),
            scenario: scenario.to_string(),
            truncation: truncation.to_vec(),
            q_mode: q_mode.to_string(),
            status: Status::Skipped,
            details: None,
            lhs_minus_rhs_support: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn pass(mut self) -> Self {
        self.status = Status::Pass;
        self
    }

    pub fn fail(mut self, message: &str, support: Vec<String>) -> Self {
        self.status = Status::Fail;
        self.details = Some(message.to_string());
        self.lhs_minus_rhs_support = support.into_iter().take(MAX_SUPPORT).collect();
        self
    }

    pub fn skipped(mut self, reason: &str) -> Self {
        self.status = Status::Skipped;
        self.details = Some(reason.to_string());
        self
    }

    pub fn undecided(mut self, reason: &str) -> Self {
        self.status = Status::Undecided;
        self.details = Some(reason.to_string());
        self
    }

    pub fn with_elapsed_ms(mut self, ms: u64) -> Self {
        self.elapsed_ms = Some(ms);
        self
    }

    /// One human-readable line: `status  check  [scenario]  details`.
    pub fn render_line(&self) -> String {
        let mut line = format!("{:<9} {}  [{}]", self.status.as_str(), self.check, self.scenario);
        if let Some(d) = &self.details {
            line.push_str("  ");
            line.push_str(d);
        }
        line
    }
}

// =============================== Run report ===============================

/// Summary counters over a run's records.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub undecided: usize,
}

/// A full run: tool version, an echo of the configuration, all per-check
/// records, and summary counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: String,
    pub entries: Vec<CheckRecord>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(config_echo: &str) -> Self {
        RunReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config_echo.to_string(),
            entries: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        match record.status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
            Status::Skipped => self.summary.skipped += 1,
            Status::Undecided => self.summary.undecided += 1,
        }
        self.summary.total += 1;
        self.entries.push(record);
    }

    /// Removes every elapsed-time field so the serialized report is
    /// byte-stable across runs.
    pub fn strip_timing(&mut self) {
        for e in &mut self.entries {
            e.elapsed_ms = None;
        }
    }

    /// Process exit code contract: 0 when nothing failed (skips included),
    /// 1 when any check failed.  Undecided counts as not-passed but is
    /// surfaced through the summary, not the exit code.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

// ================================= Tests =================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip_through_json() {
        let rec = CheckRecord::new("reineke_inverse", "a2(p=2)", &[4, 4], "specialized")
            .fail("sides differ", vec!["E: 1".into(), "S0: -1".into()])
            .with_elapsed_ms(12);
        let text = serde_json::to_string(&rec).unwrap();
        let back: CheckRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.check, "reineke_inverse");
        assert_eq!(back.status, Status::Fail);
        assert_eq!(back.lhs_minus_rhs_support.len(), 2);
        assert_eq!(back.elapsed_ms, Some(12));
        assert!(text.contains("\"status\":\"fail\""));
    }

    #[test]
    fn support_lists_are_capped() {
        let too_many: Vec<String> = (0..25).map(|i| format!("C{}: 1", i)).collect();
        let rec = CheckRecord::new("x", "s", &[1], "specialized").fail("m", too_many);
        assert_eq!(rec.lhs_minus_rhs_support.len(), MAX_SUPPORT);
    }

    #[test]
    fn summary_counts_and_exit_codes() {
        let mut rep = RunReport::new("inline");
        rep.push(CheckRecord::new("a", "s", &[1], "specialized").pass());
        rep.push(CheckRecord::new("b", "s", &[1], "specialized").skipped("cap"));
        assert_eq!(rep.summary.total, 2);
        assert_eq!(rep.summary.passed, 1);
        assert_eq!(rep.summary.skipped, 1);
        assert_eq!(rep.exit_code(), 0);
        rep.push(CheckRecord::new("c", "s", &[1], "specialized").fail("m", vec![]));
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn stripping_timing_makes_reports_byte_stable() {
        let build = |ms: u64| {
            let mut rep = RunReport::new("inline");
            rep.push(CheckRecord::new("a", "s", &[1], "specialized").pass().with_elapsed_ms(ms));
            rep.strip_timing();
            rep.to_json()
        };
        assert_eq!(build(5), build(900));
        assert!(!build(5).contains("elapsed_ms"));
    }
}
