use rayon::prelude::*;
use serde::Serialize;

use super::growth::sphere_limit;
use super::{check_setting, extrapolate, geometric_grid, LelongEstimate, NuValue, DEFAULT_POINTS, DEFAULT_RMAX, DEFAULT_RMIN};
use crate::catalog::{ModelFunction, Point};
use crate::error::{Error, Result};
use crate::integrate::{ball_current_mass, Coefficient, Estimate, MCConfig, SimpleCurrent};
use crate::setting::Setting;

/// Mass of `(dd^c phi)^m ^ beta^{n-m}` on `B(a, r)`.
pub fn hessian_measure_mass(setting: &Setting, phi: &ModelFunction, a: &Point, r: f64, cfg: &MCConfig) -> Result<Estimate> {
    check_setting(setting, phi.dim())?;
    let t = SimpleCurrent::new(Coefficient::Unit, vec![(phi.clone(), setting.m())], setting.n() - setting.m())?;
    ball_current_mass(&t, a, r, cfg)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AtomEstimate {
    /// `lim_{r->0}` of the Hessian-measure mass of `B(a, r)`; `None` when unsupported.
    pub atom: Option<f64>,
    pub stderr: f64,
    pub supported: bool,
    pub label: &'static str,
}

/// Point mass of the m-Hessian measure of `phi` at `a`.
///
/// Only inputs symmetric about `a` are supported; others are reported unsupported.
pub fn hessian_atom(setting: &Setting, phi: &ModelFunction, a: &Point, cfg: &MCConfig) -> Result<AtomEstimate> {
    check_setting(setting, phi.dim())?;
    if phi.symmetric_about(a).is_none() {
        return Ok(AtomEstimate { atom: None, stderr: 0.0, supported: false, label: "unsupported" });
    }
    let radii = geometric_grid(DEFAULT_RMIN, DEFAULT_RMAX, DEFAULT_POINTS)?;
    let masses: Vec<Estimate> =
        radii.par_iter().map(|&r| hessian_measure_mass(setting, phi, a, r, cfg)).collect::<Result<_>>()?;
    let values: Vec<f64> = masses.iter().map(|m| m.value).collect();
    let stderrs: Vec<f64> = masses.iter().map(|m| m.stderr).collect();
    let (atom, stderr, _) = extrapolate(&radii, &values, &stderrs);
    Ok(AtomEstimate { atom: atom.value(), stderr, supported: true, label: "hypothesis-unverified" })
}

/// Calibrated sphere-mean Lelong numbers of `phi` at each point.
pub fn lelong_map(
    setting: &Setting,
    phi: &ModelFunction,
    points: &[Point],
    kappa: f64,
    cfg: &MCConfig,
) -> Result<Vec<LelongEstimate>> {
    check_setting(setting, phi.dim())?;
    points.par_iter().map(|p| sphere_limit(setting, phi, p, kappa, cfg)).collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UscReport {
    pub checked: usize,
    pub passed: bool,
    /// Largest `nu(y) - nu(x) - tol` over grid points `x` and neighbours `y`.
    pub worst_excess: f64,
    pub worst_point: Option<Vec<f64>>,
}

fn nu_or_inf(e: &LelongEstimate) -> f64 {
    match e.nu {
        NuValue::Value(v) => v,
        NuValue::DoesNotConverge => f64::INFINITY,
    }
}

/// Upper semicontinuity of `a -> nu(a)` on a `side^3` grid in the first three real
/// coordinates around `center`, comparing each node with neighbours at distance `step/64`.
pub fn usc_spot_check(
    setting: &Setting,
    phi: &ModelFunction,
    center: &Point,
    side: usize,
    step: f64,
    kappa: f64,
    cfg: &MCConfig,
) -> Result<UscReport> {
    check_setting(setting, phi.dim())?;
    if side == 0 || !(step > 0.0) {
        return Err(Error::invalid("grid needs a positive side and step"));
    }
    let dims = 3.min(2 * setting.n());
    let half = (side as f64 - 1.0) / 2.0;
    let shift = |p: &Point, axis: usize, t: f64| {
        let mut dir = vec![0.0; 2 * setting.n()];
        dir[axis] = 1.0;
        p.offset(&dir, t)
    };
    let mut nodes = vec![center.clone()];
    for axis in 0..dims {
        nodes = nodes
            .iter()
            .flat_map(|p| (0..side).map(move |i| (p.clone(), i)))
            .map(|(p, i)| shift(&p, axis, (i as f64 - half) * step))
            .collect();
    }
    let h = step / 64.0;
    let results: Vec<(f64, Vec<f64>)> = nodes
        .par_iter()
        .map(|x| {
            let at = sphere_limit(setting, phi, x, kappa, cfg)?;
            let mut worst = f64::NEG_INFINITY;
            for axis in 0..dims {
                for sign in [-1.0, 1.0] {
                    let y = sphere_limit(setting, phi, &shift(x, axis, sign * h), kappa, cfg)?;
                    let tol = (3.0 * (at.stderr + y.stderr)).max(1e-3);
                    worst = worst.max(nu_or_inf(&y) - nu_or_inf(&at) - tol);
                }
            }
            Ok((worst, x.to_reals()))
        })
        .collect::<Result<_>>()?;
    let (worst_excess, worst_point) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, None), |acc, (w, p)| if w > acc.0 { (w, Some(p)) } else { acc });
    Ok(UscReport { checked: nodes.len(), passed: !(worst_excess > 0.0), worst_excess, worst_point })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_atom() {
        let st = Setting::new(3, 2).unwrap();
        let f = ModelFunction::fundamental(&st, Point::origin(3));
        let at = hessian_atom(&st, &f, &Point::origin(3), &MCConfig::default()).unwrap();
        assert!(at.supported);
        assert!((at.atom.unwrap() - 1.0).abs() < 1e-6, "{:?}", at.atom);
    }

    #[test]
    fn two_pole_atom_unsupported() {
        let st = Setting::new(2, 1).unwrap();
        let o = Point::origin(2);
        let e1 = Point::from_reals(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::scaled_sum(vec![
            (1.0, ModelFunction::fundamental(&st, o.clone())),
            (2.0, ModelFunction::fundamental(&st, e1)),
        ])
        .unwrap();
        assert!(!hessian_atom(&st, &f, &o, &MCConfig::default()).unwrap().supported);
    }

    #[test]
    fn map_reads_pole_weights() {
        let st = Setting::new(2, 1).unwrap();
        let o = Point::origin(2);
        let e1 = Point::from_reals(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::scaled_sum(vec![
            (1.0, ModelFunction::fundamental(&st, o.clone())),
            (2.0, ModelFunction::fundamental(&st, e1.clone())),
        ])
        .unwrap();
        let mid = Point::from_reals(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        let v = lelong_map(&st, &f, &[o, e1, mid], 1.0, &MCConfig::default()).unwrap();
        let nu: Vec<f64> = v.iter().map(|e| e.nu.value().unwrap()).collect();
        assert!((nu[0] - 1.0).abs() < 1e-6 && (nu[1] - 2.0).abs() < 1e-6 && nu[2].abs() < 1e-6, "{nu:?}");
    }

    #[test]
    fn usc_small_grid() {
        let st = Setting::new(2, 1).unwrap();
        let f = ModelFunction::fundamental(&st, Point::origin(2));
        let rep = usc_spot_check(&st, &f, &Point::origin(2), 3, 0.1, 1.0, &MCConfig::default()).unwrap();
        assert_eq!(rep.checked, 27);
        assert!(rep.passed, "{rep:?}");
    }
}
