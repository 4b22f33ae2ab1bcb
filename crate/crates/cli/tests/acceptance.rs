//! Runs every acceptance criterion on the four reference settings and prints one line per criterion.

use std::collections::BTreeMap;

use lelong_cli::config::{RunConfig, CRITERIA};
use lelong_cli::report::{Report, Status};
use lelong_cli::{run_verify_suite, KNOWN_FAILURES};

const SETTINGS: [(usize, usize); 4] = [(2, 1), (3, 2), (4, 2), (4, 3)];
const SAMPLES: usize = 20_000;

const TITLES: [&str; 13] = [
    "mass calibration on dd^c|z|^2",
    "fundamental solution: nu = 1 and unit atom",
    "monotone Lelong functions",
    "Lelong-Jensen closure",
    "T0 has no Lelong number",
    "negative currents: convergence and lower bound",
    "mean-value ratio law and kappa",
    "convexity in phi_m and ell <= nu",
    "Lelong map pattern and upper semicontinuity",
    "tail slope equals integral scan",
    "integrability exponent bounds",
    "compact infimum and monotonicity",
    "determinism",
];

fn config(n: usize, m: usize) -> RunConfig {
    let mut cfg = RunConfig::new(n, m).unwrap();
    cfg.samples = SAMPLES;
    cfg
}

fn main() {
    let reports: Vec<Report> = SETTINGS.iter().map(|&(n, m)| run_verify_suite(&config(n, m)).unwrap()).collect();

    // criterion 13 additionally compares two complete reports byte for byte
    let again = run_verify_suite(&config(2, 1)).unwrap();
    let identical = again.to_json() == reports[0].to_json();

    let mut by_criterion: BTreeMap<&str, Vec<(String, Status)>> = BTreeMap::new();
    for r in &reports {
        for c in &r.checks {
            let key = CRITERIA.iter().find(|k| **k == c.criterion()).copied().expect("known criterion");
            by_criterion.entry(key).or_default().push((format!("n={} m={} {}", r.setting.n, r.setting.m, c.id), c.status));
        }
    }
    by_criterion.entry("c13").or_default().push(("full report byte-identical".into(), if identical { Status::Pass } else { Status::Fail }));

    let mut unexpected = Vec::new();
    for (i, key) in CRITERIA.iter().enumerate() {
        let checks = by_criterion.get(key).map(Vec::as_slice).unwrap_or(&[]);
        let failed: Vec<&(String, Status)> = checks.iter().filter(|c| c.1 == Status::Fail).collect();
        let verdict = if failed.is_empty() && !checks.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {:<48} {verdict} ({}/{} checks)", i + 1, TITLES[i], checks.len() - failed.len(), checks.len());
        for (name, _) in &failed {
            let known = KNOWN_FAILURES.iter().any(|k| name.ends_with(k));
            println!("    failed: {name}{}", if known { " (known: the stated bound is false for T0)" } else { "" });
            if !known {
                unexpected.push(name.clone());
            }
        }
    }
    for r in &reports {
        println!("kappa n={} m={}: {:?}", r.setting.n, r.setting.m, r.kappa);
    }
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    // the known failure must still be reproduced, not silently dropped
    for r in &reports {
        assert!(r.checks.iter().any(|c| c.id == "c06-bound-t0" && c.status == Status::Fail));
    }
}
