//! Versioned run reports and their text rendering.

use crate::CliError;
use nlkit::criterion::{ConditionResult, SuiteReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const SCHEMA: &str = "nlkit-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn of(conditions: &[ConditionResult]) -> Self {
        conditions.iter().fold(Summary::default(), |s, c| Summary {
            passed: s.passed + c.passed,
            failed: s.failed + c.failed,
            inconclusive: s.inconclusive + c.inconclusive,
        })
    }

    /// 1 when anything failed; inconclusive samples do not fail a run.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub schema_version: u32,
    pub suite: String,
    pub family: String,
    pub seed: u64,
    pub budget: usize,
    pub summary: Summary,
    pub conditions: Vec<ConditionResult>,
    /// Suite-specific measurements.
    #[serde(default)]
    pub data: BTreeMap<String, serde_json::Value>,
    /// Files written alongside the report.
    #[serde(default)]
    pub artifacts: Vec<String>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub generated_at: u64,
}

impl Report {
    pub fn new(suite: &str, family: String, seed: u64, budget: usize, conditions: Vec<ConditionResult>) -> Self {
        let generated_at =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            schema: SCHEMA.to_string(),
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            family,
            seed,
            budget,
            summary: Summary::of(&conditions),
            conditions,
            data: BTreeMap::new(),
            artifacts: Vec::new(),
            generated_at,
        }
    }

    pub fn from_suite(r: SuiteReport) -> Self {
        Report::new(&r.suite, r.family, r.seed, r.budget, r.conditions)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Parses a report, rejecting other schemas and versions.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Schema(format!("not a JSON report: {e}")))?;
        match (value.get("schema").and_then(|v| v.as_str()), value.get("schema_version").and_then(|v| v.as_u64())) {
            (Some(SCHEMA), Some(v)) if v == SCHEMA_VERSION as u64 => {}
            (Some(SCHEMA), v) => {
                return Err(CliError::Schema(format!("unsupported schema_version {v:?}, expected {SCHEMA_VERSION}")))
            }
            _ => return Err(CliError::Schema(format!("missing `schema: \"{SCHEMA}\"`"))),
        }
        let report: Report = serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))?;
        if report.summary != Summary::of(&report.conditions) {
            return Err(CliError::Schema("summary does not match the condition counts".into()));
        }
        Ok(report)
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

/// Display name of a condition id.
pub fn condition_label(id: &str) -> String {
    match id {
        "C" | "2T" | "3T" | "L" | "6T" => format!("({id})"),
        "P1" => "Property (1)".into(),
        "P2" => "Property (2)".into(),
        "P3" => "Property (3)".into(),
        "EP" => "extreme proximality".into(),
        other => other.to_string(),
    }
}

fn verdict(c: &ConditionResult) -> &'static str {
    if c.failed > 0 {
        "FAIL"
    } else if c.inconclusive > 0 {
        "INCONCLUSIVE"
    } else {
        "PASS"
    }
}

/// Human-readable summary with one line per condition.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {}  family {}  seed {}  budget {}", r.suite, r.family, r.seed, r.budget);
    for c in &r.conditions {
        let coverage = if c.exhaustive { "exhaustive" } else { "sampled" };
        let _ = write!(
            out,
            "  {:<12} {:<24} {}/{} passed, {coverage}",
            verdict(c),
            condition_label(&c.id),
            c.passed,
            c.samples
        );
        if c.failed > 0 {
            let _ = write!(out, ", {} failed", c.failed);
        }
        if c.inconclusive > 0 {
            let _ = write!(out, ", {} inconclusive", c.inconclusive);
        }
        out.push('\n');
        for f in &c.failures {
            let _ = writeln!(out, "      {f}");
        }
    }
    for (k, v) in &r.data {
        let _ = writeln!(out, "  data {k}: {v}");
    }
    for a in &r.artifacts {
        let _ = writeln!(out, "  wrote {a}");
    }
    let s = r.summary;
    let _ = writeln!(out, "total: {} passed, {} failed, {} inconclusive", s.passed, s.failed, s.inconclusive);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::{condition, Outcome};
    use proptest::prelude::*;

    fn sample_report() -> Report {
        let conditions = vec![
            condition("C", (0..3).map(|i| Outcome::Pass(format!("cell {i}"))).collect(), true),
            condition("P2", vec![Outcome::Pass("ok".into()), Outcome::Inconclusive("budget".into())], false),
        ];
        Report::new("criterion", "V(2,1)".into(), 4, 3, conditions)
    }

    #[test]
    fn json_round_trip() {
        let r = sample_report();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.summary, Summary { passed: 4, failed: 0, inconclusive: 1 });
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn schema_checks() {
        let text = sample_report().to_json();
        let foreign = text.replace(SCHEMA, "other-report");
        assert!(matches!(Report::from_json(&foreign), Err(CliError::Schema(_))));
        let tampered = text.replacen("\"passed\": 4", "\"passed\": 5", 1);
        assert!(matches!(Report::from_json(&tampered), Err(CliError::Schema(_))));
        let extra = text.replacen("\"seed\": 4", "\"seed\": 4, \"colour\": 1", 1);
        assert!(matches!(Report::from_json(&extra), Err(CliError::Schema(_))));
        assert!(matches!(Report::from_json(""), Err(CliError::Schema(_))));
    }

    #[test]
    fn text_names_conditions() {
        let text = render_text(&sample_report());
        assert!(text.contains("(C)") && text.contains("Property (2)"));
        assert!(text.contains("INCONCLUSIVE"));
        assert_eq!(condition_label("EP"), "extreme proximality");
        assert_eq!(condition_label("custom"), "custom");
    }

    proptest! {
        #[test]
        fn exit_code_depends_only_on_failures(p in 0usize..50, f in 0usize..5, i in 0usize..5) {
            let s = Summary { passed: p, failed: f, inconclusive: i };
            prop_assert_eq!(s.exit_code(), i32::from(f > 0));
        }
    }
}
