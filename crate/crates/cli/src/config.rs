use std::path::Path;

use lelong_core::{Error, MCConfig, Result, Setting};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 200_000;

/// Acceptance tolerances. Every field can be overridden from a JSON file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Tolerances {
    pub calibration_rel: f64,
    pub sigmas: f64,
    pub lelong_abs: f64,
    pub atom_abs: f64,
    pub jensen_rel: f64,
    pub t0_flatness: f64,
    pub ratio_abs: f64,
    pub kappa_abs: f64,
    pub bounded_abs: f64,
    pub convexity: f64,
    pub ell_slack: f64,
    pub map_abs: f64,
    pub exponent_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            calibration_rel: 1e-6,
            sigmas: 3.0,
            lelong_abs: 1e-3,
            atom_abs: 1e-2,
            jensen_rel: 1e-2,
            t0_flatness: 1e-2,
            ratio_abs: 1e-2,
            kappa_abs: 1e-3,
            bounded_abs: 1e-6,
            convexity: 1e-9,
            ell_slack: 1e-2,
            map_abs: 1e-3,
            exponent_rel: 0.05,
        }
    }
}

impl Tolerances {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

/// Criterion identifiers accepted by `--checks`.
pub const CRITERIA: [&str; 13] = [
    "c01", "c02", "c03", "c04", "c05", "c06", "c07", "c08", "c09", "c10", "c11", "c12", "c13",
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub setting: Setting,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<String>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Ok(RunConfig {
            setting: Setting::new(n, m)?,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            checks: CRITERIA.iter().map(|s| s.to_string()).collect(),
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_checks(mut self, checks: &[&str]) -> Result<Self> {
        for c in checks {
            if !CRITERIA.contains(c) {
                return Err(Error::InvalidInput(format!("unknown check '{c}', expected one of {}", CRITERIA.join(", "))));
            }
        }
        self.checks = checks.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn mc(&self) -> MCConfig {
        MCConfig::new(self.seed, self.samples)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 samples per shell, got {}", self.samples)));
        }
        Ok(())
    }
}
