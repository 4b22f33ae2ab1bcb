//! Front end for `lelong-core`: run configuration, the verification suite and reports.

pub mod config;
pub mod report;
pub mod suite;

pub use config::{RunConfig, Tolerances};
pub use report::{CheckResult, Report, Status};
pub use suite::{run_verify_suite, KNOWN_FAILURES};
