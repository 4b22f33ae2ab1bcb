//! Lelong profiles and numbers, mean-value and supremum growth, the
//! Lelong–Jensen identity, negative currents and Hessian point masses.

mod atoms;
mod growth;
mod jensen;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::catalog::{ModelFunction, Point};
use crate::error::{Error, Result};
use crate::fit::{fit_power_offset, linear_fit};
use crate::integrate::{annulus_current_mass, ball_current_mass, Estimate, MCConfig, Method, SimpleCurrent};
use crate::setting::Setting;

pub use atoms::{hessian_atom, hessian_measure_mass, lelong_map, usc_spot_check, AtomEstimate, UscReport};
pub use growth::{calibrate_kappa, convexity_defect, mean_value_ratios, sup_growth, MeanValueReport, SupGrowthReport};
pub use jensen::{lelong_jensen, negative_current_check, JensenReport, NegativeCurrentReport};

pub const DEFAULT_RMIN: f64 = 1e-6;
pub const DEFAULT_RMAX: f64 = 0.5;
pub const DEFAULT_POINTS: usize = 24;
/// Radii used by the extrapolation.
pub const FIT_POINTS: usize = 8;
/// Below this log-log slope the profile is taken to blow up as `r -> 0`.
const DIVERGENCE_SLOPE: f64 = -0.05;

/// `points` radii, geometric from `rmin` to `rmax`.
pub fn geometric_grid(rmin: f64, rmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(rmin > 0.0) || !(rmax > rmin) || points < 2 {
        return Err(Error::invalid(format!("bad grid: rmin = {rmin}, rmax = {rmax}, points = {points}")));
    }
    let q = (rmax / rmin).powf(1.0 / (points - 1) as f64);
    let mut out: Vec<f64> = (0..points).map(|i| rmin * q.powi(i as i32)).collect();
    out[points - 1] = rmax;
    Ok(out)
}

/// Sampled `r -> nu_T(a, r)`.
#[derive(Debug, Clone, Serialize)]
pub struct LelongProfile {
    #[serde(skip)]
    pub center: Point,
    pub exponent: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub methods: Vec<Method>,
}

impl LelongProfile {
    /// CSV with columns `r,nu,stderr,method`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,nu,stderr,method\n");
        for i in 0..self.radii.len() {
            let method = method_name(self.methods[i]);
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{method}", self.radii[i], self.values[i], self.stderrs[i]);
        }
        out
    }

    /// Whether `nu` is nondecreasing in `r` within `3` combined standard errors.
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).zip(self.stderrs.windows(2)).all(|(v, s)| {
            let slack = 3.0 * s[0].hypot(s[1]) + 1e-9 * v[0].abs().max(v[1].abs());
            v[1] >= v[0] - slack
        })
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed-form",
        Method::RadialQuadrature => "radial-quadrature",
        Method::MonteCarlo => "monte-carlo",
        Method::MultiStart => "multi-start",
    }
}

/// A limit value, or the sentinel for a profile that does not settle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuValue {
    Value(f64),
    DoesNotConverge,
}

impl NuValue {
    pub fn value(self) -> Option<f64> {
        match self {
            NuValue::Value(v) => Some(v),
            NuValue::DoesNotConverge => None,
        }
    }
}

impl Serialize for NuValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NuValue::Value(v) => s.serialize_f64(*v),
            NuValue::DoesNotConverge => s.serialize_str("does-not-converge"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LelongMethod {
    DefinitionExtrapolation,
    SphereMean,
    BallMean,
    SupGrowth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FitDiagnostics {
    /// `flat`, `offset-power` or `divergent`.
    pub model: &'static str,
    pub residual: f64,
    pub gamma: Option<f64>,
    pub radii_used: Vec<f64>,
    /// Profile nondecreasing within error, when checked.
    pub monotone: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LelongEstimate {
    pub nu: NuValue,
    pub stderr: f64,
    pub method: LelongMethod,
    pub diagnostics: FitDiagnostics,
}

/// Limit as `r -> 0` of sampled values on ascending radii.
///
/// Flat profiles return the smallest-radius value; profiles whose magnitude grows
/// like a negative power of `r` return the sentinel; otherwise `y0 + C r^gamma`
/// is fitted on the smallest radii.
pub(crate) fn extrapolate(radii: &[f64], values: &[f64], stderrs: &[f64]) -> (NuValue, f64, FitDiagnostics) {
    let k = FIT_POINTS.min(radii.len());
    let (r, v, s) = (&radii[..k], &values[..k], &stderrs[..k]);
    let max_se = s.iter().copied().fold(0.0, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let diag = |model, residual, gamma| FitDiagnostics { model, residual, gamma, radii_used: r.to_vec(), monotone: None };
    if hi - lo < (3.0 * max_se).max(1e-6) {
        return (NuValue::Value(v[0]), max_se, diag("flat", hi - lo, None));
    }
    let same_sign = v.iter().all(|x| *x > 0.0) || v.iter().all(|x| *x < 0.0);
    if same_sign {
        let lr: Vec<f64> = r.iter().map(|x| x.ln()).collect();
        let lv: Vec<f64> = v.iter().map(|x| x.abs().ln()).collect();
        if let Some(f) = linear_fit(&lr, &lv) {
            if f.slope < DIVERGENCE_SLOPE {
                return (NuValue::DoesNotConverge, max_se, diag("divergent", 1.0 - f.r_squared, Some(f.slope)));
            }
        }
    }
    match fit_power_offset(r, v) {
        Some(f) => (NuValue::Value(f.y0), max_se.max(f.rms), diag("offset-power", f.rms, Some(f.gamma))),
        None => (NuValue::DoesNotConverge, max_se, diag("divergent", f64::NAN, None)),
    }
}

fn check_setting(setting: &Setting, n: usize) -> Result<()> {
    if setting.n() != n {
        return Err(Error::invalid(format!("setting has n = {}, input has dimension {n}", setting.n())));
    }
    Ok(())
}

/// `nu_T(a, r) = mass(T ^ beta^p, B(a, r)) / r^{(2n/m)(m+p-n)}` on a geometric grid.
pub fn lelong_function(
    setting: &Setting,
    t: &SimpleCurrent,
    a: &Point,
    radii: &[f64],
    cfg: &MCConfig,
) -> Result<LelongProfile> {
    check_setting(setting, t.dim())?;
    let exponent = setting.lelong_exponent(t.bidimension())?;
    let increasing = radii.windows(2).all(|w| w[0] < w[1]);
    let masses = if t.symmetry_about(a).is_none() && increasing && !radii.is_empty() {
        cumulative_masses(t, a, radii, cfg)?
    } else {
        radii.par_iter().map(|&r| ball_current_mass(t, a, r, cfg)).collect::<Result<Vec<Estimate>>>()?
    };
    let scale: Vec<f64> = radii.iter().map(|r| r.powf(-exponent)).collect();
    Ok(LelongProfile {
        center: a.clone(),
        exponent,
        radii: radii.to_vec(),
        values: masses.iter().zip(&scale).map(|(m, s)| m.value * s).collect(),
        stderrs: masses.iter().zip(&scale).map(|(m, s)| m.stderr * s).collect(),
        methods: masses.iter().map(|m| m.method).collect(),
    })
}

// Sampled masses: one ball at the smallest radius, then thin annuli with independent streams.
fn cumulative_masses(t: &SimpleCurrent, a: &Point, radii: &[f64], cfg: &MCConfig) -> Result<Vec<Estimate>> {
    let first = ball_current_mass(t, a, radii[0], cfg)?;
    let rings: Vec<Estimate> = radii
        .par_windows(2)
        .enumerate()
        .map(|(k, w)| {
            let ring = MCConfig { seed: cfg.seed ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15), shells: 2, ..*cfg };
            annulus_current_mass(t, a, w[0], w[1], &ring)
        })
        .collect::<Result<_>>()?;
    let mut out = vec![first];
    for ring in rings {
        let prev = *out.last().expect("nonempty");
        out.push(prev.add_scaled(ring, 1.0));
    }
    Ok(out)
}

/// Lelong number of `T` at `a` from the profile on the default grid.
pub fn lelong_number(setting: &Setting, t: &SimpleCurrent, a: &Point, cfg: &MCConfig) -> Result<LelongEstimate> {
    let radii = geometric_grid(DEFAULT_RMIN, DEFAULT_RMAX, DEFAULT_POINTS)?;
    let profile = lelong_function(setting, t, a, &radii, cfg)?;
    Ok(lelong_number_from_profile(&profile))
}

pub fn lelong_number_from_profile(profile: &LelongProfile) -> LelongEstimate {
    let (nu, stderr, mut diagnostics) = extrapolate(&profile.radii, &profile.values, &profile.stderrs);
    diagnostics.monotone = Some(profile.is_monotone());
    LelongEstimate { nu, stderr, method: LelongMethod::DefinitionExtrapolation, diagnostics }
}

/// `nu` of `dd^c phi` at `a`.
pub fn function_lelong_number(setting: &Setting, phi: &ModelFunction, a: &Point, cfg: &MCConfig) -> Result<LelongEstimate> {
    lelong_number(setting, &SimpleCurrent::ddc_power(phi.clone(), 1)?, a, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::Coefficient;

    fn fund(n: usize, m: usize) -> (Setting, ModelFunction) {
        let st = Setting::new(n, m).unwrap();
        (st, ModelFunction::fundamental(&st, Point::origin(n)))
    }

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(1e-3, 1.0, 4).unwrap();
        assert!((g[1] - 1e-2).abs() < 1e-15 && g[3] == 1.0);
        assert!(geometric_grid(1.0, 0.5, 3).is_err());
    }

    #[test]
    fn fundamental_number_is_one() {
        for (n, m) in [(2, 1), (3, 2), (4, 3)] {
            let (st, f) = fund(n, m);
            let est = function_lelong_number(&st, &f, &Point::origin(n), &MCConfig::default()).unwrap();
            assert!((est.nu.value().unwrap() - 1.0).abs() < 1e-9, "{est:?}");
            assert_eq!(est.diagnostics.monotone, Some(true));
        }
    }

    #[test]
    fn quadratic_number_is_zero() {
        let st = Setting::new(3, 2).unwrap();
        let est = function_lelong_number(&st, &ModelFunction::quadratic(3), &Point::origin(3), &MCConfig::default()).unwrap();
        assert!(est.nu.value().unwrap().abs() < 1e-6);
    }

    #[test]
    fn t0_does_not_converge() {
        let (st, f) = fund(3, 2);
        let t0 = SimpleCurrent::new(Coefficient::Function(f.clone()), vec![(f, 1)], 0).unwrap();
        let est = lelong_number(&st, &t0, &Point::origin(3), &MCConfig::default()).unwrap();
        assert_eq!(est.nu, NuValue::DoesNotConverge);
    }

    #[test]
    fn extrapolates_offset_power() {
        let r = geometric_grid(1e-4, 1e-1, 12).unwrap();
        let v: Vec<f64> = r.iter().map(|x| 0.25 + x.powf(0.7)).collect();
        let (nu, _, d) = extrapolate(&r, &v, &vec![0.0; r.len()]);
        assert!((nu.value().unwrap() - 0.25).abs() < 1e-8);
        assert_eq!(d.model, "offset-power");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let (st, f) = fund(2, 1);
        let t = SimpleCurrent::ddc_power(f, 1).unwrap();
        let p = lelong_function(&st, &t, &Point::origin(2), &[0.1, 0.2], &MCConfig::default()).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("r,nu,stderr,method\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("closed-form"));
    }
}
