use rayon::prelude::*;
use serde::Serialize;

use super::sampler::Layout;
use super::{centered_term, tube_volume, CompactRegion, ExponentEstimate, ExponentMethod};
use crate::catalog::{Iota, ModelFunction};
use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::integrate::{ball_sup, MCConfig, Method};

/// Default `|t|` range of the tail fit.
pub const T_RANGE: (f64, f64) = (1e2, 1e5);
/// Range used when the default fit is not linear enough.
pub const WIDE_RANGE: (f64, f64) = (1e1, 1e7);
pub const T_POINTS: usize = 16;
pub const MIN_R_SQUARED: f64 = 0.99;
/// Fitted slopes above this, or fits below `MIN_R_SQUARED`, are read as faster-than-power decay.
pub const ALPHA_CAP: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SublevelEstimate {
    pub t: f64,
    pub volume: f64,
    pub stderr: f64,
    pub method: Method,
    /// `t >= 0`: the sublevel set is all of the region.
    pub degenerate: bool,
}

fn check_negative(phi: &ModelFunction, region: &CompactRegion) -> Result<()> {
    for (c, r) in region.balls() {
        let sup = ball_sup(phi, c, *r)?;
        if sup.value >= 0.0 {
            return Err(Error::invalid(format!("function is not negative on the region (sup {:e})", sup.value)));
        }
    }
    Ok(())
}

fn closed_sublevel(phi: &ModelFunction, region: &CompactRegion, t: f64) -> Option<f64> {
    let n = phi.dim();
    if let Some((coef, k, profile, radius)) = centered_term(phi, region) {
        return Some(match profile.inverse(t / coef) {
            Some(rho2) => tube_volume(n, k, rho2.sqrt(), radius),
            None => region.volume(),
        });
    }
    let terms = phi.terms();
    let [term] = terms.as_slice() else { return None };
    let [(c, r)] = region.balls() else { return None };
    if term.k != n || term.coef <= 0.0 || !term.profile.is_singular() {
        return None;
    }
    let rho = term.profile.inverse(t / term.coef)?.sqrt();
    let d = c.distance(term.center);
    if d + rho <= *r {
        Some(super::ball_volume(n, rho))
    } else if rho <= d - r {
        Some(0.0)
    } else {
        None
    }
}

fn sublevel_from(phi: &ModelFunction, region: &CompactRegion, t: f64, layout: &mut Option<Layout>, cfg: &MCConfig) -> Result<SublevelEstimate> {
    if t >= 0.0 {
        return Ok(SublevelEstimate { t, volume: region.volume(), stderr: 0.0, method: Method::ClosedForm, degenerate: true });
    }
    if let Some(v) = closed_sublevel(phi, region, t) {
        return Ok(SublevelEstimate { t, volume: v, stderr: 0.0, method: Method::ClosedForm, degenerate: false });
    }
    if layout.is_none() {
        *layout = Some(Layout::build(phi, region, cfg)?);
    }
    let (volume, stderr) = layout.as_ref().expect("layout built").sublevel(t);
    Ok(SublevelEstimate { t, volume, stderr, method: Method::MonteCarlo, degenerate: false })
}

/// Volume of `{phi <= t}` inside the region.
pub fn sublevel_volume(phi: &ModelFunction, region: &CompactRegion, t: f64, cfg: &MCConfig) -> Result<SublevelEstimate> {
    check_dim(phi, region)?;
    if t < 0.0 {
        check_negative(phi, region)?;
    }
    sublevel_from(phi, region, t, &mut None, cfg)
}

fn check_dim(phi: &ModelFunction, region: &CompactRegion) -> Result<()> {
    if phi.dim() != region.dim() {
        return Err(Error::invalid(format!("function has dimension {}, region {}", phi.dim(), region.dim())));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TailFit {
    /// Minus the slope of `log V` against `log |t|`.
    pub alpha: f64,
    pub alpha_stderr: f64,
    /// `V <= C_alpha / |t|^alpha`.
    pub c_alpha: f64,
    pub r_squared: f64,
    pub t_range: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TailReport {
    pub iota: Iota,
    pub fit: Option<TailFit>,
    pub samples: Vec<SublevelEstimate>,
}

impl TailReport {
    pub fn estimate(&self) -> ExponentEstimate {
        match (&self.iota, &self.fit) {
            (Iota::Finite(a), Some(f)) => ExponentEstimate {
                iota: Iota::Finite(*a),
                method: ExponentMethod::TailSlope,
                interval: Some((a - 3.0 * f.alpha_stderr, a + 3.0 * f.alpha_stderr)),
            },
            _ => ExponentEstimate::unbounded(ExponentMethod::TailSlope),
        }
    }

    /// CSV with columns `t, volume, stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,volume,stderr\n");
        for s in &self.samples {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.t, s.volume, s.stderr));
        }
        out
    }
}

fn fit_range(
    phi: &ModelFunction,
    region: &CompactRegion,
    range: (f64, f64),
    layout: &Option<Layout>,
    cfg: &MCConfig,
) -> Result<(Vec<SublevelEstimate>, Option<TailFit>)> {
    let ts = crate::lelong::geometric_grid(range.0, range.1, T_POINTS)?;
    let samples: Vec<SublevelEstimate> = ts
        .par_iter()
        .map(|a| sublevel_from(phi, region, -a, &mut layout.clone(), cfg))
        .collect::<Result<_>>()?;
    let pos: Vec<&SublevelEstimate> = samples.iter().filter(|s| s.volume > 0.0).collect();
    if pos.len() < 4 {
        return Ok((samples, None));
    }
    let x: Vec<f64> = pos.iter().map(|s| (-s.t).ln()).collect();
    let y: Vec<f64> = pos.iter().map(|s| s.volume.ln()).collect();
    let fit = linear_fit(&x, &y).map(|f| TailFit {
        alpha: -f.slope,
        alpha_stderr: f.slope_stderr,
        c_alpha: f.intercept.exp(),
        r_squared: f.r_squared,
        t_range: (-pos[pos.len() - 1].t, -pos[0].t),
    });
    Ok((samples, fit))
}

/// `alpha` with `V({phi <= t}) ~ C / |t|^alpha` as `t -> -inf`.
pub fn tail_exponent(phi: &ModelFunction, region: &CompactRegion, cfg: &MCConfig) -> Result<TailReport> {
    check_dim(phi, region)?;
    if !region.meets_pole(phi) {
        return Ok(TailReport { iota: Iota::Unbounded, fit: None, samples: Vec::new() });
    }
    check_negative(phi, region)?;
    let layout = match centered_term(phi, region) {
        Some(_) => None,
        None => Some(Layout::build(phi, region, cfg)?),
    };
    let (mut samples, mut fit) = fit_range(phi, region, T_RANGE, &layout, cfg)?;
    if fit.as_ref().is_none_or(|f| f.r_squared < MIN_R_SQUARED) {
        (samples, fit) = fit_range(phi, region, WIDE_RANGE, &layout, cfg)?;
    }
    let iota = match &fit {
        Some(f) if f.alpha <= ALPHA_CAP && f.r_squared >= MIN_R_SQUARED => Iota::Finite(f.alpha),
        _ => Iota::Unbounded,
    };
    Ok(TailReport { iota, fit, samples })
}
