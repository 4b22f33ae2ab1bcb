use std::f64::consts::PI;

use super::current::{factorial, CurrentSymmetry, SimpleCurrent};
use super::quadrature::geometric_integral;
use super::rng::{self, sharded_moments};
use super::{Estimate, MCConfig, Method};
use crate::catalog::Point;
use crate::error::{Error, Result};
use crate::hermitian::binomial;

/// How `ball_current_mass_with` evaluates the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MassRoute {
    /// Flux, then density quadrature, then Monte Carlo, whichever applies first.
    #[default]
    Auto,
    /// Closed currents symmetric about the center: mass through the boundary sphere.
    Flux,
    /// Symmetric currents: one-dimensional quadrature of the density, plus any atom at the center.
    Density,
    /// Stratified shell Monte Carlo.
    MonteCarlo,
}

/// Relative size below which a flux/density gap is rounding, not an atom.
const ATOM_TOL: f64 = 1e-7;

fn check_radii(r1: f64, r2: f64) -> Result<()> {
    if !(r1 >= 0.0) || !(r2 > r1) || !r2.is_finite() {
        return Err(Error::invalid(format!("need 0 <= r1 < r2, got r1 = {r1}, r2 = {r2}")));
    }
    Ok(())
}

/// `int_{B(a,r)} T ^ beta^p`.
pub fn ball_current_mass(t: &SimpleCurrent, a: &Point, r: f64, cfg: &MCConfig) -> Result<Estimate> {
    ball_current_mass_with(t, a, r, cfg, MassRoute::Auto)
}

pub fn ball_current_mass_with(
    t: &SimpleCurrent,
    a: &Point,
    r: f64,
    cfg: &MCConfig,
    route: MassRoute,
) -> Result<Estimate> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    check_point(t, a)?;
    let sym = t.symmetry_about(a);
    if route == MassRoute::Auto && sym.is_none() {
        if let Some(parts) = split_linear(t) {
            return sum_parts(parts, |p| ball_current_mass(p, a, r, cfg));
        }
    }
    let constant_coef = sym.as_ref().and_then(constant_coefficient);
    match (route, sym) {
        (MassRoute::Auto | MassRoute::Flux, Some(s)) if constant_coef.is_some() => {
            let c = constant_coef.unwrap_or(1.0);
            let (v, exact) = flux_mass(&s, t.dim(), t.ddc_degree(), r);
            let method = if exact { Method::ClosedForm } else { Method::RadialQuadrature };
            Ok(Estimate::exact(c * v, method))
        }
        (MassRoute::Flux, _) => Err(Error::invalid("flux route needs a closed current symmetric about the center")),
        (MassRoute::Auto | MassRoute::Density, Some(s)) => density_mass(t, &s, a, 0.0, r, true),
        (MassRoute::Density, None) => Err(Error::invalid("density route needs a current symmetric about the center")),
        (_, _) => monte_carlo_mass(t, a, 0.0, r, cfg),
    }
}

/// `int_{r1 < |z - a| < r2} T ^ beta^p`.
pub fn annulus_current_mass(t: &SimpleCurrent, a: &Point, r1: f64, r2: f64, cfg: &MCConfig) -> Result<Estimate> {
    check_radii(r1, r2)?;
    if r1 == 0.0 {
        return ball_current_mass(t, a, r2, cfg);
    }
    check_point(t, a)?;
    match t.symmetry_about(a) {
        Some(s) if constant_coefficient(&s).is_some() => {
            let c = constant_coefficient(&s).unwrap_or(1.0);
            let (v2, e2) = flux_mass(&s, t.dim(), t.ddc_degree(), r2);
            let (v1, _) = flux_mass(&s, t.dim(), t.ddc_degree(), r1);
            Ok(Estimate::exact(c * (v2 - v1), if e2 { Method::ClosedForm } else { Method::RadialQuadrature }))
        }
        Some(s) if s.k == t.dim() => density_mass(t, &s, a, r1, r2, false),
        Some(s) => {
            let outer = density_mass(t, &s, a, 0.0, r2, true)?;
            let inner = density_mass(t, &s, a, 0.0, r1, true)?;
            Ok(outer.add_scaled(inner, -1.0))
        }
        None => match split_linear(t) {
            Some(parts) => sum_parts(parts, |p| annulus_current_mass(p, a, r1, r2, cfg)),
            None => monte_carlo_mass(t, a, r1, r2, cfg),
        },
    }
}

/// `g dd^c(sum c_i f_i) ^ beta^j = sum c_i g dd^c f_i ^ beta^j` for a single simple factor.
fn split_linear(t: &SimpleCurrent) -> Option<Vec<(f64, SimpleCurrent)>> {
    let [(f, 1)] = t.factors() else {
        return None;
    };
    let terms = f.terms();
    if terms.len() < 2 {
        return None;
    }
    terms
        .iter()
        .map(|term| {
            SimpleCurrent::new(t.coefficient().clone(), vec![(term.to_function(), 1)], t.beta_power())
                .ok()
                .map(|c| (term.coef, c))
        })
        .collect()
}

fn sum_parts(
    parts: Vec<(f64, SimpleCurrent)>,
    mass: impl Fn(&SimpleCurrent) -> Result<Estimate>,
) -> Result<Estimate> {
    let mut total = Estimate::exact(0.0, Method::ClosedForm);
    for (c, p) in &parts {
        if *c != 0.0 {
            total = total.add_scaled(mass(p)?, *c);
        }
    }
    Ok(total)
}

fn check_point(t: &SimpleCurrent, a: &Point) -> Result<()> {
    if a.dim() != t.dim() {
        return Err(Error::invalid(format!("center has dimension {}, current has {}", a.dim(), t.dim())));
    }
    Ok(())
}

fn constant_coefficient(s: &CurrentSymmetry) -> Option<f64> {
    match &s.coefficient {
        None => Some(1.0),
        Some(v) if v.is_constant() => Some(v.value(1.0)),
        Some(_) => None,
    }
}

/// Mass of the closed part over `B(a, r)` by flux through the boundary.
///
/// Returns the value and whether it is a closed form (no quadrature).
fn flux_mass(s: &CurrentSymmetry, n: usize, q: usize, r: f64) -> (f64, bool) {
    let k = s.k;
    if q > k {
        return (0.0, true);
    }
    // v^k prod g_i'(v)^{e_i}, the flux through |z'|^2 = v
    let flux = |v: f64| {
        let mut f = v.powi(k as i32);
        for (g, e) in &s.factors {
            f *= g.d1(v).powi(*e as i32);
        }
        f
    };
    if k == n {
        return (flux(r * r), true);
    }
    let d = n - k;
    let t = r * r;
    let integral = geometric_integral(0.0, t, |v| flux(v) * d as f64 * (t - v).powi(d as i32 - 1));
    (binomial(n - q, k - q) * integral, false)
}

/// Lebesgue measure factor for a density depending on `u = |P_k(z - a)|` over the ball of radius `r`.
pub(crate) fn shell_measure(n: usize, k: usize, u: f64, r: f64) -> f64 {
    let sphere = 2.0 * PI.powi(k as i32) / factorial(k - 1) * u.powi(2 * k as i32 - 1);
    if k == n {
        sphere
    } else {
        let d = n - k;
        sphere * PI.powi(d as i32) * (r * r - u * u).max(0.0).powi(d as i32) / factorial(d)
    }
}

/// Log-slope of `|f|` at `1e-6 r` against `1e-7 r`.
fn local_slope(f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let (a, b) = (f(1e-6 * r).abs(), f(1e-7 * r).abs());
    if a == 0.0 && b == 0.0 {
        return f64::INFINITY;
    }
    (a / b).ln() / 10f64.ln()
}

fn density_mass(t: &SimpleCurrent, s: &CurrentSymmetry, a: &Point, r1: f64, r2: f64, with_atom: bool) -> Result<Estimate> {
    let n = t.dim();
    let k = s.k;
    let coef = |u: f64| s.coefficient.as_ref().map_or(1.0, |v| v.value(u * u));
    let closed = |u: f64| t.closed_density(&a.along_first_axis(u)).unwrap_or(f64::NAN);
    let dens = |u: f64| {
        let c = coef(u);
        if c == 0.0 {
            0.0
        } else {
            c * closed(u)
        }
    };
    let integrable = |f: &dyn Fn(f64) -> f64| local_slope(f, r2) + 2.0 * k as f64 > 1e-6;
    if r1 == 0.0 && !integrable(&dens) {
        return Err(Error::DivergentIntegral(format!("density of order u^{:.3} near the pole", local_slope(dens, r2))));
    }
    let radius_for_measure = r2;
    let mass = geometric_integral(r1, r2, |u| dens(u) * shell_measure(n, k, u, radius_for_measure));
    if !mass.is_finite() {
        return Err(Error::DivergentIntegral("density quadrature did not produce a finite value".into()));
    }
    let mut value = mass;
    if with_atom && r1 == 0.0 {
        let c0 = coef(0.0);
        let closed_ok = integrable(&closed);
        let (flux, _) = flux_mass(s, n, t.ddc_degree(), r2);
        if closed_ok {
            let closed_int = geometric_integral(0.0, r2, |u| closed(u) * shell_measure(n, k, u, radius_for_measure));
            let gap = flux - closed_int;
            if gap.abs() > ATOM_TOL * flux.abs().max(closed_int.abs()).max(f64::MIN_POSITIVE) {
                if !c0.is_finite() {
                    return Err(Error::DivergentIntegral("coefficient is infinite on a point mass".into()));
                }
                value += c0 * gap;
            }
        } else if c0 != 0.0 {
            return Err(Error::DivergentIntegral("wedge product is not locally integrable at the center".into()));
        }
    }
    Ok(Estimate::exact(value, Method::RadialQuadrature))
}

fn monte_carlo_mass(t: &SimpleCurrent, a: &Point, r1: f64, r2: f64, cfg: &MCConfig) -> Result<Estimate> {
    let n = t.dim();
    let shells = cfg.shells.max(1);
    // strata: geometric shells from r2 inward, then the inner ball when r1 = 0
    let ratio = if r1 > 0.0 { (r1 / r2).powf(1.0 / shells as f64) } else { 0.5 };
    let mut bounds: Vec<(f64, f64)> = (0..shells)
        .map(|j| (r2 * ratio.powi(j as i32 + 1), r2 * ratio.powi(j as i32)))
        .collect();
    if r1 == 0.0 {
        bounds.push((0.0, r2 * ratio.powi(shells as i32)));
    } else if let Some(last) = bounds.last_mut() {
        last.0 = r1;
    }
    let probe = a.along_first_axis(0.5 * (bounds[0].0 + bounds[0].1));
    match t.density(&probe) {
        Err(e @ Error::InvalidInput(_)) => return Err(e),
        _ => {}
    }
    let pairs = cfg.samples_per_shell.div_ceil(2);
    let unit_ball = PI.powi(n as i32) / factorial(n);
    let mut total = Estimate::exact(0.0, Method::MonteCarlo);
    for (j, (lo, hi)) in bounds.into_iter().enumerate() {
        let vol = unit_ball * (hi.powi(2 * n as i32) - lo.powi(2 * n as i32));
        let mom = sharded_moments(cfg.seed, "current-mass", j as u64, pairs, |rng| {
            let u = rng::unit_sphere(rng, n);
            let rho = rng::shell_radius(rng, n, lo, hi);
            let p = t.density(&a.offset(&u, rho)).ok()?;
            let m = t.density(&a.offset(&u, -rho)).ok()?;
            let v = 0.5 * (p + m);
            v.is_finite().then_some(v)
        });
        total = total.add_scaled(Estimate { value: mom.mean, stderr: mom.stderr(), method: Method::MonteCarlo }, vol);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ModelFunction, Profile};
    use crate::integrate::Coefficient;
    use crate::setting::Setting;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn calibration_all_routes() {
        for n in 2..=4 {
            let o = Point::origin(n);
            let t = SimpleCurrent::ddc_power(ModelFunction::quadratic(n), 1).unwrap();
            for r in [0.1f64, 0.5, 1.0] {
                let want = r.powi(2 * n as i32);
                let flux = ball_current_mass(&t, &o, r, &MCConfig::default()).unwrap();
                assert_eq!(flux.method, Method::ClosedForm);
                assert!(rel(flux.value, want) < 1e-12);
                let dens = ball_current_mass_with(&t, &o, r, &MCConfig::default(), MassRoute::Density).unwrap();
                assert!(rel(dens.value, want) < 1e-6, "n={n} r={r} {}", dens.value);
            }
        }
    }

    #[test]
    fn fundamental_mass_and_atom() {
        let st = Setting::new(3, 2).unwrap();
        let o = Point::origin(3);
        let f = ModelFunction::fundamental(&st, o.clone());
        let t = SimpleCurrent::ddc_power(f.clone(), 1).unwrap();
        let r: f64 = 0.4;
        let want = r.powf(2.0 * 3.0 * 1.0 / 2.0);
        assert!(rel(ball_current_mass(&t, &o, r, &MCConfig::default()).unwrap().value, want) < 1e-12);
        let dens = ball_current_mass_with(&t, &o, r, &MCConfig::default(), MassRoute::Density).unwrap();
        assert!(rel(dens.value, want) < 1e-6);
        let top = SimpleCurrent::new(Coefficient::Unit, vec![(f, 2)], 1).unwrap();
        assert!(rel(ball_current_mass(&top, &o, r, &MCConfig::default()).unwrap().value, 1.0) < 1e-12);
        // the density route sees the point mass through the flux gap
        let d = ball_current_mass_with(&top, &o, r, &MCConfig::default(), MassRoute::Density).unwrap();
        assert!(rel(d.value, 1.0) < 1e-6, "{}", d.value);
    }

    #[test]
    fn cylinder_flux_matches_density() {
        let n = 4;
        let o = Point::origin(n);
        let f = ModelFunction::cylindrical(o.clone(), 3, Profile::Power { s: 0.5 }).unwrap();
        let t = SimpleCurrent::ddc_power(f, 1).unwrap();
        let flux = ball_current_mass(&t, &o, 0.7, &MCConfig::default()).unwrap();
        let dens = ball_current_mass_with(&t, &o, 0.7, &MCConfig::default(), MassRoute::Density).unwrap();
        assert!(rel(flux.value, dens.value) < 1e-6, "{} {}", flux.value, dens.value);
    }

    #[test]
    fn monte_carlo_calibration() {
        let n = 3;
        let o = Point::origin(n);
        let t = SimpleCurrent::ddc_power(ModelFunction::quadratic(n), 1).unwrap();
        let cfg = MCConfig { seed: 42, samples_per_shell: 2_000, shells: 4 };
        let mc = ball_current_mass_with(&t, &o, 0.5, &cfg, MassRoute::MonteCarlo).unwrap();
        assert!((mc.value - 0.5f64.powi(6)).abs() < 1e-12, "constant density is exact");
    }

    #[test]
    fn annulus_additivity() {
        let st = Setting::new(4, 2).unwrap();
        let o = Point::origin(4);
        let f = ModelFunction::fundamental(&st, o.clone());
        let g = ModelFunction::radial(o.clone(), Profile::Affine { c0: -1.0, c1: 1.0 }).unwrap();
        let t = SimpleCurrent::new(Coefficient::Function(g), vec![(f, 1)], 1).unwrap();
        let cfg = MCConfig::default();
        let b2 = ball_current_mass(&t, &o, 0.6, &cfg).unwrap().value;
        let b1 = ball_current_mass(&t, &o, 0.2, &cfg).unwrap().value;
        let ann = annulus_current_mass(&t, &o, 0.2, 0.6, &cfg).unwrap().value;
        assert!(rel(ann, b2 - b1) < 1e-8);
        assert!(annulus_current_mass(&t, &o, 0.3, 0.3, &cfg).is_err());
    }
}
