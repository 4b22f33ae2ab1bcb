//! Sphere and ball averages, suprema over balls, and masses of simple currents.
//!
//! Rotation-invariant integrands reduce to one-dimensional quadrature; the
//! rest use stratified Monte Carlo with counter-based streams so results do
//! not depend on thread scheduling.

mod current;
pub(crate) mod mass;
mod means;
pub(crate) mod quadrature;
pub(crate) mod rng;

use serde::{Deserialize, Serialize};

pub(crate) use current::factorial;
pub use current::{Coefficient, CurrentSymmetry, SimpleCurrent};
pub use mass::{annulus_current_mass, ball_current_mass, ball_current_mass_with, MassRoute};
pub use means::{ball_mean, ball_sup, sphere_mean};

/// Monte Carlo parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MCConfig {
    pub seed: u64,
    pub samples_per_shell: usize,
    pub shells: usize,
}

impl MCConfig {
    pub fn new(seed: u64, samples_per_shell: usize) -> Self {
        MCConfig { seed, samples_per_shell, ..Self::default() }
    }
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig { seed: 42, samples_per_shell: 20_000, shells: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    RadialQuadrature,
    MonteCarlo,
    /// Best value of a multi-start local search; a lower bound for a supremum.
    MultiStart,
}

impl Method {
    /// The least exact of two methods.
    pub(crate) fn combine(self, other: Method) -> Method {
        use Method::*;
        match (self, other) {
            (MonteCarlo, _) | (_, MonteCarlo) => MonteCarlo,
            (MultiStart, _) | (_, MultiStart) => MultiStart,
            (RadialQuadrature, _) | (_, RadialQuadrature) => RadialQuadrature,
            _ => ClosedForm,
        }
    }
}

/// A numerical value with its standard error (zero unless Monte Carlo).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Estimate { value, stderr: 0.0, method }
    }

    /// `self + c * other` with independent errors.
    pub(crate) fn add_scaled(self, other: Estimate, c: f64) -> Estimate {
        Estimate {
            value: self.value + c * other.value,
            stderr: self.stderr.hypot(c * other.stderr),
            method: self.method.combine(other.method),
        }
    }
}
