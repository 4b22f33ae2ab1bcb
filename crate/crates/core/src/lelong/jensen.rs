use std::cell::RefCell;

use serde::Serialize;

use super::{check_setting, extrapolate, geometric_grid, lelong_function, NuValue};
use crate::catalog::{ModelFunction, Point};
use crate::error::{Error, Result};
use crate::integrate::quadrature::{geometric_integral, gl16};
use crate::integrate::{annulus_current_mass, ball_current_mass, Estimate, MCConfig, Method, SimpleCurrent};
use crate::setting::Setting;

/// Points in the radius grid of the negative-current check.
pub const CHECK_POINTS: usize = 16;
/// The grid spans `[r0 * CHECK_SPAN, r0]`.
pub const CHECK_SPAN: f64 = 1e-3;

/// Integrates a fallible estimate-valued integrand, returning value and propagated stderr.
fn integrate(lo: f64, hi: f64, singular: bool, f: impl Fn(f64) -> Result<Estimate>) -> Result<(f64, f64)> {
    let err = RefCell::new(None);
    let sampled = RefCell::new(false);
    let quad = |g: &dyn Fn(f64) -> f64| if singular { geometric_integral(lo, hi, g) } else { gl16(lo, hi, g) };
    let v = quad(&|t| match f(t) {
        Ok(e) => {
            if e.method == Method::MonteCarlo {
                *sampled.borrow_mut() = true;
            }
            e.value
        }
        Err(x) => {
            err.borrow_mut().get_or_insert(x);
            0.0
        }
    });
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let s = if sampled.into_inner() { quad(&|t| f(t).map(|e| e.stderr).unwrap_or(0.0)).abs() } else { 0.0 };
    Ok((v, s))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JensenReport {
    pub r1: f64,
    pub r2: f64,
    pub exponent: f64,
    /// `nu_T(r2) - nu_T(r1)`.
    pub lhs: f64,
    pub terms: [f64; 3],
    pub rhs: f64,
    /// `|lhs - rhs|` relative to the largest of the terms and `|nu_T(r1)|`, `|nu_T(r2)|`.
    pub residual: f64,
    pub stderr: f64,
}

/// Both sides of the Lelong-Jensen identity for `T` between radii `r1 < r2` around `a`.
pub fn lelong_jensen(setting: &Setting, t: &SimpleCurrent, a: &Point, r1: f64, r2: f64, cfg: &MCConfig) -> Result<JensenReport> {
    check_setting(setting, t.dim())?;
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::invalid(format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
    }
    let p = t.bidimension();
    let e = setting.lelong_exponent(p)?;
    let k = setting.m() + p - setting.n();
    let m1 = ball_current_mass(t, a, r1, cfg)?;
    let m2 = ball_current_mass(t, a, r2, cfg)?;
    let (nu1, nu2) = (m1.value / r1.powf(e), m2.value / r2.powf(e));
    let lhs = nu2 - nu1;
    let mut stderr = m2.stderr / r2.powf(e) + m1.stderr / r1.powf(e);

    let (term1, term2) = match t.ddc() {
        None => (0.0, 0.0),
        Some(dd) => {
            let singular = dd.symmetry_about(a).is_some();
            let mass = |s: f64| ball_current_mass(&dd, a, s, cfg);
            let (t1, s1) = integrate(r1, r2, singular, |s| {
                let w = (s.powf(-e) - r2.powf(-e)) * 2.0 * s;
                mass(s).map(|m| Estimate { value: w * m.value, stderr: w.abs() * m.stderr, method: m.method })
            })?;
            let (t2, s2) = integrate(0.0, r1, singular, |s| {
                mass(s).map(|m| Estimate { value: 2.0 * s * m.value, stderr: 2.0 * s * m.stderr, method: m.method })
            })?;
            let c = r1.powf(-e) - r2.powf(-e);
            stderr += s1 + c.abs() * s2;
            (t1, c * t2)
        }
    };

    let term3 = {
        let kernel = ModelFunction::fundamental(setting, a.clone());
        let w = t.wedge(kernel, k, setting.n() - setting.m())?;
        let m = annulus_current_mass(&w, a, r1, r2, cfg)?;
        stderr += m.stderr;
        m.value
    };
    let rhs = term1 + term2 + term3;
    let scale = (term1.abs() + term2.abs() + term3.abs()).max(nu1.abs()).max(nu2.abs()).max(1e-300);
    Ok(JensenReport {
        r1,
        r2,
        exponent: e,
        lhs,
        terms: [term1, term2, term3],
        rhs,
        residual: (lhs - rhs).abs() / scale,
        stderr,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NegativeCurrentReport {
    pub r0: f64,
    /// `m + p - 1 >= n`, needed for `dd^c T` to have a Lelong function.
    pub hypothesis_holds: bool,
    pub radii: Vec<f64>,
    pub nu: Vec<f64>,
    /// `nu_T(r) - nu_{dd^c T}(r0) r^{2(1-n/m)} / (1 - n/m)`.
    pub upsilon: Vec<f64>,
    /// `min(0, upsilon(r0))`.
    pub c0: f64,
    /// Per radius: `nu_T(r) >= c0 + nu_{dd^c T}(r0) r^{2(1-n/m)} / (1 - n/m)`.
    pub bound_satisfied: Vec<bool>,
    pub bound_holds: bool,
    pub upsilon_nonincreasing: bool,
    /// Same bound with the `dd^c T` term scaled by `max(1, e/(E+2))`.
    pub corrected_constant: f64,
    pub corrected_bound_holds: bool,
    /// Power of `t` in `t^{1-2n/m} nu_{dd^c T}(t)` near 0.
    pub kernel_exponent: f64,
    pub kernel_integrable: bool,
    pub g: Option<Vec<f64>>,
    pub g_nonincreasing: Option<bool>,
    pub converged: bool,
    pub limit: Option<f64>,
}

/// Lower bound and convergence diagnostics for a current with `dd^c T >= 0`.
pub fn negative_current_check(setting: &Setting, t: &SimpleCurrent, a: &Point, r0: f64, cfg: &MCConfig) -> Result<NegativeCurrentReport> {
    check_setting(setting, t.dim())?;
    if !(r0 > 0.0) {
        return Err(Error::invalid(format!("r0 must be positive, got {r0}")));
    }
    let (n, m) = (setting.n() as f64, setting.m() as f64);
    let p = t.bidimension();
    let e = setting.lelong_exponent(p)?;
    let hypothesis_holds = setting.m() + p > setting.n();
    let big_e = 2.0 * n / m * (m + p as f64 - 1.0 - n);
    let radii = geometric_grid(r0 * CHECK_SPAN, r0, CHECK_POINTS)?;
    let profile = lelong_function(setting, t, a, &radii, cfg)?;
    let nu = profile.values.clone();

    let dd = t.ddc();
    let dd_mass = |s: f64| -> Result<Estimate> {
        match &dd {
            Some(d) => ball_current_mass(d, a, s, cfg),
            None => Ok(Estimate::exact(0.0, Method::ClosedForm)),
        }
    };
    let nu_dd0 = dd_mass(r0)?.value / r0.powf(big_e);
    let w = 2.0 * (1.0 - n / m);
    let shift = |r: f64| nu_dd0 * r.powf(w) / (1.0 - n / m);
    let upsilon: Vec<f64> = radii.iter().zip(&nu).map(|(r, v)| v - shift(*r)).collect();
    let c0 = upsilon.last().copied().unwrap_or(0.0).min(0.0);
    let tol = |i: usize| 1e-9 * (nu[i].abs() + shift(radii[i]).abs()) + 3.0 * profile.stderrs[i];
    let bound_satisfied: Vec<bool> = (0..radii.len()).map(|i| upsilon[i] >= c0 - tol(i)).collect();
    let upsilon_nonincreasing = upsilon.windows(2).enumerate().all(|(i, u)| u[1] <= u[0] + tol(i) + tol(i + 1));

    let corrected_constant = if big_e + 2.0 > 0.0 { (e / (big_e + 2.0)).max(1.0) } else { f64::INFINITY };
    let corrected_bound_holds = corrected_constant.is_finite() && {
        let k = corrected_constant;
        let c = (nu[nu.len() - 1] - k * shift(r0)).min(0.0);
        (0..radii.len()).all(|i| nu[i] - k * shift(radii[i]) >= c - k * tol(i))
    };

    let (kernel_exponent, kernel_integrable) = match &dd {
        None => (f64::INFINITY, true),
        Some(_) => {
            let (t1, t2) = (1e-7 * r0, 1e-6 * r0);
            let (a1, a2) = (dd_mass(t1)?.value, dd_mass(t2)?.value);
            if a1 <= 0.0 || a2 <= 0.0 {
                (f64::INFINITY, true)
            } else {
                let slope = (a2 / a1).ln() / (t2 / t1).ln();
                let x = 1.0 - 2.0 * n / m - big_e + slope;
                (x, x > -1.0 + 1e-6)
            }
        }
    };

    let (g, g_nonincreasing, converged, limit) = if kernel_integrable {
        let singular = dd.as_ref().map_or(true, |d| d.symmetry_about(a).is_some());
        let g: Vec<f64> = radii
            .iter()
            .zip(&nu)
            .map(|(&r, v)| {
                let (i, _) = integrate(0.0, r, singular, |s| {
                    let k = ((s / r).powf(e) - 1.0) * s.powf(1.0 - 2.0 * n / m - big_e);
                    dd_mass(s).map(|x| Estimate { value: k * x.value, stderr: k.abs() * x.stderr, method: x.method })
                })?;
                Ok(v + 2.0 * i)
            })
            .collect::<Result<_>>()?;
        let scale = g.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
        let mono = g.windows(2).all(|x| x[1] <= x[0] + 1e-7 * scale);
        let se: Vec<f64> = profile.stderrs.clone();
        let (lim, _, _) = extrapolate(&radii, &g, &se);
        let limit = match lim {
            NuValue::Value(v) => Some(v),
            NuValue::DoesNotConverge => None,
        };
        (Some(g), Some(mono), mono && limit.is_some(), limit)
    } else {
        (None, None, false, None)
    };

    Ok(NegativeCurrentReport {
        r0,
        hypothesis_holds,
        radii,
        nu,
        upsilon,
        c0,
        bound_holds: bound_satisfied.iter().all(|b| *b),
        bound_satisfied,
        upsilon_nonincreasing,
        corrected_constant,
        corrected_bound_holds,
        kernel_exponent,
        kernel_integrable,
        g,
        g_nonincreasing,
        converged,
        limit,
    })
}
