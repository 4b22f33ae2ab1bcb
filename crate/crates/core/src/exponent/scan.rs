use rayon::prelude::*;
use serde::Serialize;

use super::sampler::{Layout, SHELLS};
use super::{CompactRegion, ExponentEstimate, ExponentMethod};
use crate::catalog::{Iota, ModelFunction, Point};
use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::integrate::MCConfig;
use crate::lelong::{function_lelong_number, LelongEstimate, NuValue};
use crate::setting::Setting;

/// Largest exponent tried; convergence there is reported as unbounded.
pub const C_MAX: f64 = 64.0;
pub const BISECTION_WIDTH: f64 = 1e-3;

/// `int |phi|^c` converges near every anchor: shell integrals decay as a positive power of the radius.
fn converges(layout: &Layout, c: f64) -> bool {
    layout.log_shell_integrals(c).iter().all(|shells| {
        let (x, y): (Vec<f64>, Vec<f64>) = shells[SHELLS / 2..SHELLS.min(shells.len())]
            .iter()
            .filter(|(_, v)| v.is_finite())
            .map(|(r, v)| (r.ln(), *v))
            .unzip();
        if x.len() < 4 {
            return true;
        }
        linear_fit(&x, &y).is_none_or(|f| f.slope > 0.0)
    })
}

/// Supremum of `c` with `|phi|^c` integrable on the region, bisected to width `1e-3`.
pub fn integrability_exponent(phi: &ModelFunction, region: &CompactRegion, cfg: &MCConfig) -> Result<ExponentEstimate> {
    if phi.dim() != region.dim() {
        return Err(Error::invalid(format!("function has dimension {}, region {}", phi.dim(), region.dim())));
    }
    let unbounded = ExponentEstimate::unbounded(ExponentMethod::IntegralScan);
    if !region.meets_pole(phi) {
        return Ok(unbounded);
    }
    let layout = Layout::build(phi, region, cfg)?;
    if converges(&layout, C_MAX) {
        return Ok(unbounded);
    }
    let (mut lo, mut hi) = (0.0, C_MAX);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if converges(&layout, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ExponentEstimate { iota: Iota::Finite(0.5 * (lo + hi)), method: ExponentMethod::IntegralScan, interval: Some((lo, hi)) })
}

/// Whether two estimates agree within their errors plus `rel` of the smaller value.
pub(crate) fn agree(a: &ExponentEstimate, b: &ExponentEstimate, rel: f64) -> bool {
    match (a.iota, b.iota) {
        (Iota::Unbounded, Iota::Unbounded) => true,
        (Iota::Finite(x), Iota::Finite(y)) => (x - y).abs() <= a.error() + b.error() + rel * x.min(y),
        _ => false,
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompactInfimumReport {
    pub per_point: Vec<(Vec<f64>, ExponentEstimate)>,
    pub infimum: ExponentEstimate,
    /// Exponent on the whole region.
    pub direct: ExponentEstimate,
    pub consistent: bool,
}

fn local_radius(phi: &ModelFunction, x: &Point) -> f64 {
    let other = phi.poles().iter().map(|p| p.distance(x)).filter(|d| *d > 1e-9).fold(f64::INFINITY, f64::min);
    (0.5 * other).min(0.25)
}

/// `inf_x iota_x` over sample points, checked against the exponent of the whole region.
pub fn compact_infimum(
    phi: &ModelFunction,
    region: &CompactRegion,
    points: &[Point],
    cfg: &MCConfig,
) -> Result<CompactInfimumReport> {
    for pole in phi.poles() {
        let inside = region.balls().iter().any(|(c, r)| pole.distance(c) <= *r);
        if inside && !points.iter().any(|x| pole.distance(x) <= 1e-9) {
            return Err(Error::invalid(format!("pole at {:?} inside the region is not among the sample points", pole.anchor.to_reals())));
        }
    }
    let per_point: Vec<(Vec<f64>, ExponentEstimate)> = points
        .par_iter()
        .map(|x| {
            let ball = CompactRegion::ball(x.clone(), local_radius(phi, x))?;
            Ok((x.to_reals(), integrability_exponent(phi, &ball, cfg)?))
        })
        .collect::<Result<_>>()?;
    let infimum = per_point
        .iter()
        .map(|p| p.1)
        .min_by(|a, b| {
            let key = |e: &ExponentEstimate| e.iota.finite().unwrap_or(f64::INFINITY);
            key(a).total_cmp(&key(b))
        })
        .unwrap_or(ExponentEstimate::unbounded(ExponentMethod::IntegralScan));
    let direct = integrability_exponent(phi, region, cfg)?;
    let consistent = agree(&infimum, &direct, 0.02);
    Ok(CompactInfimumReport { per_point, infimum, direct, consistent })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsReport {
    pub iota: ExponentEstimate,
    pub nu: LelongEstimate,
    /// `n/(n-m)`.
    pub lower: f64,
    pub lower_holds: bool,
    /// `nm/(n-m)`.
    pub upper: f64,
    /// `nu > 3 * stderr`, so the upper bound applies.
    pub upper_applicable: bool,
    pub upper_holds: Option<bool>,
    /// For `m = 1` with `nu > 0`: `iota = n/(n-1)` within 5%.
    pub m1_identity: Option<bool>,
}

/// Lower and upper bounds of the integrability exponent at `a`.
pub fn bounds_report(setting: &Setting, phi: &ModelFunction, a: &Point, cfg: &MCConfig) -> Result<BoundsReport> {
    let ball = CompactRegion::ball(a.clone(), local_radius(phi, a).min(0.5))?;
    let iota = integrability_exponent(phi, &ball, cfg)?;
    let nu = function_lelong_number(setting, phi, a, cfg)?;
    let lower = setting.lower_exponent();
    let upper = setting.critical_exponent();
    let value = iota.iota.finite();
    let lower_holds = value.is_none_or(|v| v + iota.error() >= lower * (1.0 - 1e-6));
    let upper_applicable = matches!(nu.nu, NuValue::Value(v) if v > (3.0 * nu.stderr).max(1e-6));
    let upper_holds = upper_applicable.then(|| value.is_some_and(|v| v - iota.error() <= upper * 1.05));
    let m1_identity = (setting.m() == 1 && upper_applicable).then(|| value.is_some_and(|v| (v / lower - 1.0).abs() <= 0.05));
    Ok(BoundsReport { iota, nu, lower, lower_holds, upper, upper_applicable, upper_holds, m1_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Profile;

    fn fund(n: usize, m: usize) -> (Setting, ModelFunction) {
        let st = Setting::new(n, m).unwrap();
        (st, ModelFunction::fundamental(&st, Point::origin(n)))
    }

    #[test]
    fn fundamental_scan() {
        for (n, m) in [(2, 1), (3, 2), (4, 2)] {
            let (st, f) = fund(n, m);
            let k = CompactRegion::ball(Point::origin(n), 0.5).unwrap();
            let e = integrability_exponent(&f, &k, &MCConfig::default()).unwrap();
            assert!((e.iota.finite().unwrap() - st.critical_exponent()).abs() < 2e-3, "{e:?}");
        }
    }

    #[test]
    fn log_pole_unbounded() {
        let g = ModelFunction::radial(Point::origin(2), Profile::Log).unwrap();
        let k = CompactRegion::ball(Point::origin(2), 0.5).unwrap();
        assert_eq!(integrability_exponent(&g, &k, &MCConfig::default()).unwrap().iota, Iota::Unbounded);
    }

    #[test]
    fn missing_pole_rejected() {
        let (_, f) = fund(2, 1);
        let k = CompactRegion::ball(Point::origin(2), 0.5).unwrap();
        let p = Point::from_reals(&[0.1, 0.0, 0.0, 0.0]).unwrap();
        assert!(compact_infimum(&f, &k, &[p], &MCConfig::default()).is_err());
    }

    #[test]
    fn m1_bounds() {
        let (st, f) = fund(3, 1);
        let rep = bounds_report(&st, &f, &Point::origin(3), &MCConfig::default()).unwrap();
        assert!(rep.lower_holds && rep.upper_holds == Some(true) && rep.m1_identity == Some(true), "{rep:?}");
    }
}
