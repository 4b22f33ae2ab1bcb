use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{ModelFunction, Point, Profile, Term};
use crate::hermitian::{binomial, eigenvalues};

const SAMPLES: usize = 10_000;
const SAMPLE_SEED: u64 = 0x6d73_685f_636c_6173;
const THRESHOLD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MshClass {
    Msh,
    NotMsh,
    /// m-subharmonic with `sigma_m` identically zero off the poles.
    Boundary,
}

impl MshClass {
    pub fn is_msh(self) -> bool {
        self != MshClass::NotMsh
    }
}

/// Classifies `f` as m-subharmonic or not.
///
/// Single radial or cylindrical terms use the closed-form threshold; sums are
/// sampled at deterministic points.
pub fn msh_classify(f: &ModelFunction, m: usize) -> MshClass {
    let terms: Vec<Term<'_>> = f.terms().into_iter().filter(|t| t.coef > 0.0).collect();
    match terms.as_slice() {
        [] => MshClass::Msh,
        [t] => classify_term(t, m),
        _ => classify_by_sampling(f, m),
    }
}

fn classify_term(t: &Term<'_>, m: usize) -> MshClass {
    match *t.profile {
        Profile::Power { s } => {
            let thr = t.k as f64 / m.min(t.k) as f64 - 1.0;
            if (s - thr).abs() <= THRESHOLD_TOL * thr.max(1.0) {
                MshClass::Boundary
            } else if s < thr {
                MshClass::Msh
            } else {
                MshClass::NotMsh
            }
        }
        Profile::Log => {
            if m >= t.k {
                MshClass::Boundary
            } else {
                MshClass::Msh
            }
        }
        Profile::Affine { c1, .. } => {
            if c1 >= 0.0 {
                MshClass::Msh
            } else {
                MshClass::NotMsh
            }
        }
    }
}

fn classify_by_sampling(f: &ModelFunction, m: usize) -> MshClass {
    let n = f.dim();
    let terms = f.terms();
    let radius = 2.0 * terms.iter().map(|t| t.center.norm()).fold(1.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut all_flat = true;
    let mut taken = 0;
    while taken < SAMPLES {
        let z = uniform_ball_point(&mut rng, n, radius);
        let Ok(h) = f.complex_hessian(&z) else { continue };
        taken += 1;
        let spec = eigenvalues(&h);
        let top = spec.max_abs();
        for k in 1..=m.min(n) {
            let scale = binomial(n, k) * top.powi(k as i32);
            let tol = THRESHOLD_TOL * (1.0 + scale);
            let sk = spec.sigma(k);
            if sk < -tol {
                return MshClass::NotMsh;
            }
            if k == m && sk > tol {
                all_flat = false;
            }
        }
    }
    if all_flat {
        MshClass::Boundary
    } else {
        MshClass::Msh
    }
}

fn uniform_ball_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Point {
    let g: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rho = radius * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    Point::from_reals(&g.iter().map(|x| x / norm * rho).collect::<Vec<_>>()).expect("even length")
}
