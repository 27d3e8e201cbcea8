//! Machine-readable check reports shared by the CLI and the test suites.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "setlab-report/1";

/// One executed check. The `anchor` is a stable identifier naming the
/// identity the check verifies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub anchor: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
    /// Only emitted when timing is requested; omitted by default so that
    /// identical inputs produce byte-identical reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            schema: REPORT_SCHEMA.into(),
            command: command.into(),
            seed,
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn push(
        &mut self,
        check: &str,
        anchor: &str,
        pass: bool,
        detail: Option<serde_json::Value>,
    ) {
        self.pass &= pass;
        self.checks.push(CheckEntry {
            check: check.into(),
            anchor: anchor.into(),
            pass,
            detail,
            runtime_ms: None,
        });
    }

    /// Attaches a runtime to the most recent entry.
    pub fn time_last(&mut self, ms: u64) {
        if let Some(last) = self.checks.last_mut() {
            last.runtime_ms = Some(ms);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_entries() {
        let mut r = Report::new("verify-algebra", 0);
        r.push("a", "anchor-a", true, None);
        assert!(r.pass);
        r.push(
            "b",
            "anchor-b",
            false,
            Some(serde_json::json!({"residual": "X{};P{}"})),
        );
        assert!(!r.pass);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("setlab-report/1"));
        assert!(!json.contains("runtime_ms"));
    }
}
