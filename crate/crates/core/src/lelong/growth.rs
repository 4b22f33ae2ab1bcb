use rayon::prelude::*;
use serde::Serialize;

use super::{check_setting, extrapolate, geometric_grid, function_lelong_number, LelongEstimate, LelongMethod, NuValue};
use crate::catalog::{ModelFunction, Point};
use crate::error::{Error, Result};
use crate::integrate::{ball_mean, ball_sup, sphere_mean, Estimate, MCConfig, Method};
use crate::setting::Setting;

pub const MEAN_RMIN: f64 = 1e-8;
pub const MEAN_POINTS: usize = 32;
/// Positive limits below this are treated as zero when forming ratios.
const POSITIVE: f64 = 1e-6;

/// Radii for mean-value limits at `a`: `1e-8` up to half the distance to any other pole (at most `0.5`).
pub(crate) fn mean_value_radii(phi: &ModelFunction, a: &Point, points: usize) -> Result<Vec<f64>> {
    let other = phi
        .poles()
        .iter()
        .map(|p| p.distance(a))
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let rmax = (0.5 * other).min(0.5);
    if rmax <= 10.0 * MEAN_RMIN {
        return Err(Error::invalid(format!("point is within {other:e} of another pole")));
    }
    geometric_grid(MEAN_RMIN, rmax, points)
}

fn ratio_estimate(setting: &Setting, radii: &[f64], means: &[Estimate], method: LelongMethod, kappa: f64) -> LelongEstimate {
    let w: Vec<f64> = radii.iter().map(|r| setting.phi_m(*r)).collect();
    let values: Vec<f64> = means.iter().zip(&w).map(|(m, p)| m.value / p).collect();
    let stderrs: Vec<f64> = means.iter().zip(&w).map(|(m, p)| m.stderr / p.abs()).collect();
    let (nu, stderr, diagnostics) = extrapolate(radii, &values, &stderrs);
    let nu = match nu {
        NuValue::Value(v) => NuValue::Value(kappa * v),
        other => other,
    };
    LelongEstimate { nu, stderr: kappa * stderr, method, diagnostics }
}

/// `kappa * lim lambda(phi, a, r) / phi_m(r)`, using sphere means only.
pub(crate) fn sphere_limit(setting: &Setting, phi: &ModelFunction, a: &Point, kappa: f64, cfg: &MCConfig) -> Result<LelongEstimate> {
    let radii = mean_value_radii(phi, a, MEAN_POINTS)?;
    let means: Vec<Estimate> = radii.par_iter().map(|&r| sphere_mean(phi, a, r, cfg)).collect::<Result<_>>()?;
    Ok(ratio_estimate(setting, &radii, &means, LelongMethod::SphereMean, kappa))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MeanValueReport {
    /// `lim lambda / phi_m`, uncalibrated.
    pub q_sphere: LelongEstimate,
    /// `lim Lambda / phi_m`, uncalibrated.
    pub q_ball: LelongEstimate,
    /// `q_ball / q_sphere` when `q_sphere > 0`.
    pub ratio: Option<f64>,
    /// `n / (n + 1 - n/m)`.
    pub expected_ratio: f64,
    pub kappa: f64,
    /// `kappa * q_sphere`.
    pub calibrated_nu: Option<f64>,
    /// Smallest normalized second difference of `lambda` against `phi_m(r)`.
    pub sphere_convexity_defect: f64,
}

/// Sphere and ball mean-value limits of `phi` at `a`.
pub fn mean_value_ratios(setting: &Setting, phi: &ModelFunction, a: &Point, kappa: f64, cfg: &MCConfig) -> Result<MeanValueReport> {
    check_setting(setting, phi.dim())?;
    let radii = mean_value_radii(phi, a, MEAN_POINTS)?;
    let pairs: Vec<(Estimate, Estimate)> = radii
        .par_iter()
        .map(|&r| Ok((sphere_mean(phi, a, r, cfg)?, ball_mean(phi, a, r, cfg)?)))
        .collect::<Result<_>>()?;
    let (sph, ball): (Vec<Estimate>, Vec<Estimate>) = pairs.into_iter().unzip();
    let q_sphere = ratio_estimate(setting, &radii, &sph, LelongMethod::SphereMean, 1.0);
    let q_ball = ratio_estimate(setting, &radii, &ball, LelongMethod::BallMean, 1.0);
    let ratio = match (q_sphere.nu, q_ball.nu) {
        (NuValue::Value(s), NuValue::Value(b)) if s > POSITIVE => Some(b / s),
        _ => None,
    };
    let x: Vec<f64> = radii.iter().map(|r| setting.phi_m(*r)).collect();
    let y: Vec<f64> = sph.iter().map(|e| e.value).collect();
    Ok(MeanValueReport {
        calibrated_nu: q_sphere.nu.value().map(|v| kappa * v),
        q_sphere,
        q_ball,
        ratio,
        expected_ratio: setting.mean_ratio(),
        kappa,
        sphere_convexity_defect: convexity_defect(&x, &y),
    })
}

/// `kappa = nu(dd^c phi_m~) / lim lambda(phi_m~, 0, r) / phi_m(r)`.
pub fn calibrate_kappa(setting: &Setting, cfg: &MCConfig) -> Result<f64> {
    let n = setting.n();
    let f = ModelFunction::fundamental(setting, Point::origin(n));
    let nu = function_lelong_number(setting, &f, &Point::origin(n), cfg)?;
    let q = sphere_limit(setting, &f, &Point::origin(n), 1.0, cfg)?;
    match (nu.nu, q.nu) {
        (NuValue::Value(a), NuValue::Value(b)) if b != 0.0 => Ok(a / b),
        _ => Err(Error::invalid("calibration limits did not converge")),
    }
}

/// Smallest slope increment of `y` against ascending `x`, relative to the largest slope.
///
/// Nonnegative (up to rounding) iff the sampled points are convex.
pub fn convexity_defect(x: &[f64], y: &[f64]) -> f64 {
    let slopes: Vec<f64> = x.windows(2).zip(y.windows(2)).map(|(a, b)| (b[1] - b[0]) / (a[1] - a[0])).collect();
    let scale = slopes.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    slopes.windows(2).map(|s| (s[1] - s[0]) / scale).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupGrowthReport {
    /// `kappa * lim M / phi_m`.
    pub estimate: LelongEstimate,
    pub raw_limit: NuValue,
    pub convexity_defect: f64,
    /// Some supremum came from multi-start search (a lower bound).
    pub searched: bool,
}

/// `l_phi(a)` from `M(phi, a, r) / phi_m(r)`, with the discrete convexity of `M` in `phi_m(r)`.
pub fn sup_growth(setting: &Setting, phi: &ModelFunction, a: &Point, kappa: f64, points: usize) -> Result<SupGrowthReport> {
    check_setting(setting, phi.dim())?;
    let radii = mean_value_radii(phi, a, points)?;
    let sups: Vec<Estimate> = radii.par_iter().map(|&r| ball_sup(phi, a, r)).collect::<Result<_>>()?;
    let raw = ratio_estimate(setting, &radii, &sups, LelongMethod::SupGrowth, 1.0);
    let x: Vec<f64> = radii.iter().map(|r| setting.phi_m(*r)).collect();
    let y: Vec<f64> = sups.iter().map(|e| e.value).collect();
    let mut estimate = raw.clone();
    if let NuValue::Value(v) = raw.nu {
        estimate.nu = NuValue::Value(kappa * v);
        estimate.stderr *= kappa;
    }
    Ok(SupGrowthReport {
        estimate,
        raw_limit: raw.nu,
        convexity_defect: convexity_defect(&x, &y),
        searched: sups.iter().any(|e| e.method == Method::MultiStart),
    })
}
