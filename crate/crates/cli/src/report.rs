use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An expected non-convergence or a measured open gap.
    Finding,
    Skipped,
}

/// A number or a named sentinel such as `"does-not-converge"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Sentinel(&'static str),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Quantity::Number(v)
        } else if v.is_nan() {
            Quantity::Sentinel("nan")
        } else if v > 0.0 {
            Quantity::Sentinel("inf")
        } else {
            Quantity::Sentinel("-inf")
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Number(v) => write!(f, "{v:.16e}"),
            Quantity::Sentinel(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: String,
    /// Plain statement of what is checked.
    pub claim: String,
    pub status: Status,
    pub value: Option<Quantity>,
    pub expected: Option<Quantity>,
    pub tolerance: Option<f64>,
    pub diagnostics: String,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, claim: impl Into<String>, ok: bool) -> Self {
        CheckResult {
            id: id.into(),
            claim: claim.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value: None,
            expected: None,
            tolerance: None,
            diagnostics: String::new(),
        }
    }

    pub fn value(mut self, v: impl Into<Quantity>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn expected(mut self, v: impl Into<Quantity>) -> Self {
        self.expected = Some(v.into());
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn diagnostics(mut self, d: impl Into<String>) -> Self {
        self.diagnostics = d.into();
        self
    }

    /// Marks a passing check as a finding.
    pub fn finding(mut self) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Finding;
        }
        self
    }

    /// Criterion prefix of the id, e.g. `c06`.
    pub fn criterion(&self) -> &str {
        self.id.split('-').next().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SettingRecord {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub run_id: String,
    pub setting: SettingRecord,
    pub seed: u64,
    pub samples: usize,
    pub kappa: Option<f64>,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(cfg: &RunConfig, kappa: Option<f64>, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let key = format!("{}:{}:{}:{}:{}", cfg.setting.n(), cfg.setting.m(), cfg.seed, cfg.samples, cfg.checks.join(","));
        let digest = Sha256::digest(key.as_bytes());
        Report {
            run_id: digest.iter().take(8).map(|b| format!("{b:02x}")).collect(),
            setting: SettingRecord { n: cfg.setting.n(), m: cfg.setting.m() },
            seed: cfg.seed,
            samples: cfg.samples,
            kappa,
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "status", "value", "expected", "tolerance", "claim", "diagnostics"]).expect("in-memory write");
        let opt = |q: &Option<Quantity>| q.as_ref().map_or(String::new(), |q| q.to_string());
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("status serializes");
            w.write_record([
                c.id.clone(),
                status.as_str().unwrap_or_default().to_string(),
                opt(&c.value),
                opt(&c.expected),
                c.tolerance.map_or(String::new(), |t| format!("{t:.16e}")),
                c.claim.clone(),
                c.diagnostics.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Writes `text` to `path`, or stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_check_report() -> Report {
        let cfg = RunConfig::new(3, 2).unwrap();
        let checks = vec![
            CheckResult::new("c02-b", "second", false).value(0.5).expected(1.0).tolerance(1e-3),
            CheckResult::new("c01-a", "first, with comma", true).value(f64::INFINITY),
        ];
        Report::new(&cfg, Some(1.0), checks)
    }

    #[test]
    fn json_has_both_checks_in_id_order() {
        let r = two_check_report();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let checks = v["checks"].as_array().unwrap();
        assert_eq!(checks.len(), 2);
        assert_eq!(checks[0]["id"], "c01-a");
        assert_eq!(checks[0]["value"], "inf");
        assert_eq!(v["kappa"], 1.0);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn csv_quotes_fields() {
        let csv = two_check_report().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].contains("\"first, with comma\""));
        assert!(lines[2].starts_with("c02-b,fail,5.0000000000000000e-1,1.0000000000000000e0"));
    }

    #[test]
    fn run_id_depends_on_config_only() {
        assert_eq!(two_check_report().run_id, two_check_report().run_id);
        let other = Report::new(&RunConfig::new(3, 1).unwrap(), None, vec![]);
        assert_ne!(other.run_id, two_check_report().run_id);
    }
}
