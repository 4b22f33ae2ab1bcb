use rand::Rng;
use statrs::function::gamma::{digamma, ln_gamma};

use super::quadrature::gl64;
use super::rng::{self, sharded_moments};
use super::{Estimate, MCConfig, Method};
use crate::catalog::{ModelFunction, Point, Profile, Term};
use crate::error::{Error, Result};

/// Centers closer than this (relative) count as coincident.
const CENTER_TOL: f64 = 1e-14;
/// Zonal quadrature is used when the sphere stays this far (relative to `r`) from an off-center pole.
const ZONAL_MARGIN: f64 = 0.25;
const SUP_STARTS: usize = 64;
const SUP_ITERATIONS: usize = 200;

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("radius must be positive and finite, got {r}")));
    }
    Ok(())
}

fn is_symmetric(t: &Term<'_>, a: &Point) -> bool {
    t.center.partial_distance(a, t.k) <= CENTER_TOL * (1.0 + a.norm())
}

/// `E[y^{-s}]` for `y ~ Beta(k, n-k)`, the law of `|P_k u|^2` on the unit sphere.
fn beta_moment(n: usize, k: usize, s: f64) -> Result<f64> {
    if s >= k as f64 {
        return Err(Error::DivergentIntegral(format!("|z'|^(-2s) with s = {s} over a sphere, block k = {k}")));
    }
    let (n, k) = (n as f64, k as f64);
    Ok((ln_gamma(k - s) + ln_gamma(n) - ln_gamma(k) - ln_gamma(n - s)).exp())
}

/// Sphere mean of `g(|P_k(z - a)|^2)` over `|z - a| = r`.
fn symmetric_sphere_mean(p: &Profile, n: usize, k: usize, r: f64) -> Result<f64> {
    let t = r * r;
    if k == n {
        return Ok(p.value(t));
    }
    Ok(match *p {
        Profile::Power { s } => -t.powf(-s) * beta_moment(n, k, s)?,
        Profile::Log => t.ln() + digamma(k as f64) - digamma(n as f64),
        Profile::Affine { c0, c1 } => c0 + c1 * t * k as f64 / n as f64,
    })
}

/// Ball mean of `g(|P_k(z - a)|^2)` over `|z - a| < r`.
fn symmetric_ball_mean(p: &Profile, n: usize, k: usize, r: f64) -> Result<f64> {
    let nf = n as f64;
    let t = r * r;
    Ok(match *p {
        Profile::Power { s } => {
            if s >= nf {
                return Err(Error::DivergentIntegral(format!("power s = {s} is not integrable in dimension {n}")));
            }
            let shape = if k == n { 1.0 } else { beta_moment(n, k, s)? };
            -t.powf(-s) * shape * nf / (nf - s)
        }
        Profile::Log => {
            let shift = if k == n { 0.0 } else { digamma(k as f64) - digamma(nf) };
            t.ln() - 1.0 / nf + shift
        }
        Profile::Affine { c0, c1 } => c0 + c1 * t * (k as f64 / nf) * nf / (nf + 1.0),
    })
}

/// Sphere mean of `g(|z - c|^2)` over `|z - a| = r` with `D = |c - a|`, via the zonal reduction
/// `<u, e> = cos(theta)` with weight `sin^{2n-2}(theta)`.
fn zonal_sphere_mean(p: &Profile, n: usize, d: f64, r: f64) -> f64 {
    let w = |th: f64| th.sin().powi(2 * n as i32 - 2);
    let norm = gl64(0.0, std::f64::consts::PI, w);
    let num = gl64(0.0, std::f64::consts::PI, |th| w(th) * p.value(r * r + d * d - 2.0 * r * d * th.cos()));
    num / norm
}

fn monte_carlo_sum(terms: &[Term<'_>], z: &Point) -> f64 {
    terms.iter().map(|t| t.value(z)).sum()
}

/// `lambda(f, a, r)`: the average of `f` over the sphere `|z - a| = r`.
pub fn sphere_mean(f: &ModelFunction, a: &Point, r: f64, cfg: &MCConfig) -> Result<Estimate> {
    check_radius(r)?;
    let n = f.dim();
    let mut value = 0.0;
    let mut method = Method::ClosedForm;
    let mut rest = Vec::new();
    for t in f.terms() {
        if t.coef == 0.0 {
            continue;
        }
        if is_symmetric(&t, a) {
            value += t.coef * symmetric_sphere_mean(t.profile, n, t.k, r)?;
        } else if t.k == n && (t.center.distance(a) - r).abs() > ZONAL_MARGIN * r {
            value += t.coef * zonal_sphere_mean(t.profile, n, t.center.distance(a), r);
            method = method.combine(Method::RadialQuadrature);
        } else {
            rest.push(t);
        }
    }
    if rest.is_empty() {
        return Ok(Estimate::exact(value, method));
    }
    let mom = sharded_moments(cfg.seed, "sphere-mean", 0, cfg.samples_per_shell.div_ceil(2), |rng| {
        let u = rng::unit_sphere(rng, n);
        let plus = monte_carlo_sum(&rest, &a.offset(&u, r));
        let minus = monte_carlo_sum(&rest, &a.offset(&u, -r));
        let v = 0.5 * (plus + minus);
        v.is_finite().then_some(v)
    });
    Ok(Estimate { value: value + mom.mean, stderr: mom.stderr(), method: Method::MonteCarlo })
}

/// `Lambda(f, a, r)`: the average of `f` over the ball `|z - a| < r`.
pub fn ball_mean(f: &ModelFunction, a: &Point, r: f64, cfg: &MCConfig) -> Result<Estimate> {
    check_radius(r)?;
    let n = f.dim();
    let nf = n as f64;
    let mut value = 0.0;
    let mut method = Method::ClosedForm;
    let mut rest = Vec::new();
    for t in f.terms() {
        if t.coef == 0.0 {
            continue;
        }
        if let Profile::Power { s } = *t.profile {
            if s >= t.k as f64 {
                return Err(Error::DivergentIntegral(format!("power s = {s} over a block of size {}", t.k)));
            }
        }
        let d = t.center.distance(a);
        if is_symmetric(&t, a) {
            value += t.coef * symmetric_ball_mean(t.profile, n, t.k, r)?;
        } else if t.k == n && d > (1.0 + ZONAL_MARGIN) * r {
            // Lambda = 2n int_0^1 t^{2n-1} lambda(rt) dt
            let v = gl64(0.0, 1.0, |s| 2.0 * nf * s.powi(2 * n as i32 - 1) * zonal_sphere_mean(t.profile, n, d, r * s));
            value += t.coef * v;
            method = method.combine(Method::RadialQuadrature);
        } else {
            rest.push(t);
        }
    }
    if rest.is_empty() {
        return Ok(Estimate::exact(value, method));
    }
    let mom = sharded_moments(cfg.seed, "ball-mean", 0, cfg.samples_per_shell.div_ceil(2), |rng| {
        let u = rng::unit_sphere(rng, n);
        let rho = rng::shell_radius(rng, n, 0.0, r);
        let v = 0.5 * (monte_carlo_sum(&rest, &a.offset(&u, rho)) + monte_carlo_sum(&rest, &a.offset(&u, -rho)));
        v.is_finite().then_some(v)
    });
    Ok(Estimate { value: value + mom.mean, stderr: mom.stderr(), method: Method::MonteCarlo })
}

/// Real gradient of `f` at `z`, as `2n` reals.
fn real_gradient(f: &ModelFunction, z: &Point) -> Vec<f64> {
    let mut g = vec![0.0; 2 * z.dim()];
    for t in f.terms() {
        let w: Vec<_> = (0..t.k).map(|j| z.coords()[j] - t.center.coords()[j]).collect();
        let sq: f64 = w.iter().map(|c| c.norm_sqr()).sum();
        let d1 = t.coef * t.profile.d1(sq);
        for (j, c) in w.iter().enumerate() {
            g[2 * j] += 2.0 * d1 * c.re;
            g[2 * j + 1] += 2.0 * d1 * c.im;
        }
    }
    g
}

fn project(a: &Point, z: Point, r: f64) -> Point {
    let d = z.distance(a);
    if d <= r {
        return z;
    }
    let delta: Vec<f64> = z.to_reals().iter().zip(a.to_reals()).map(|(x, y)| x - y).collect();
    a.offset(&delta, r / d)
}

fn ascend(f: &ModelFunction, a: &Point, r: f64, start: Point) -> f64 {
    let mut z = start;
    let mut fz = f.evaluate(&z);
    if !fz.is_finite() {
        return fz;
    }
    let mut step = 0.1 * r;
    for _ in 0..SUP_ITERATIONS {
        let g = real_gradient(f, &z);
        let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let cand = project(a, z.offset(&g, step / gn), r);
        let fc = f.evaluate(&cand);
        if fc > fz {
            z = cand;
            fz = fc;
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-12 * r {
                break;
            }
        }
    }
    fz
}

/// `M(f, a, r)`: the supremum of `f` over the closed ball `|z - a| <= r`.
///
/// Exact for monotone single-profile inputs; otherwise the best of 64 projected
/// gradient ascents, reported with [`Method::MultiStart`].
pub fn ball_sup(f: &ModelFunction, a: &Point, r: f64) -> Result<Estimate> {
    check_radius(r)?;
    let terms: Vec<Term<'_>> = f.terms().into_iter().filter(|t| t.coef > 0.0).collect();
    if let Some(v) = f.symmetric_about(a) {
        if v.is_nondecreasing() {
            return Ok(Estimate::exact(v.value(r * r), Method::ClosedForm));
        }
    }
    match terms.as_slice() {
        [] => return Ok(Estimate::exact(0.0, Method::ClosedForm)),
        [t] => {
            let d = t.center.partial_distance(a, t.k);
            let far = (d + r) * (d + r);
            let near = (d - r).max(0.0).powi(2);
            let g = t.profile.value(far).max(t.profile.value(near));
            return Ok(Estimate::exact(t.coef * g, Method::ClosedForm));
        }
        _ => {}
    }
    let n = f.dim();
    let mut starts: Vec<Point> = vec![a.clone()];
    for p in f.poles() {
        let nearest = p.nearest(a);
        let d = nearest.distance(a);
        if d > 0.0 {
            let away: Vec<f64> = a.to_reals().iter().zip(nearest.to_reals()).map(|(x, y)| x - y).collect();
            starts.push(a.offset(&away, r / d));
        }
    }
    let mut rng = rng::stream(0, "ball-sup", 0);
    while starts.len() < SUP_STARTS {
        let u = rng::unit_sphere(&mut rng, n);
        let rho = r * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
        starts.push(a.offset(&u, rho));
    }
    let best = starts.into_iter().map(|s| ascend(f, a, r, s)).fold(f64::NEG_INFINITY, f64::max);
    Ok(Estimate::exact(best, Method::MultiStart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setting::Setting;

    fn cfg() -> MCConfig {
        MCConfig::new(42, 40_000)
    }

    #[test]
    fn radial_means() {
        let o = Point::origin(3);
        let q = ModelFunction::quadratic(3);
        assert!((sphere_mean(&q, &o, 0.7, &cfg()).unwrap().value - 0.49).abs() < 1e-15);
        let lam = ball_mean(&q, &o, 0.7, &cfg()).unwrap();
        assert!((lam.value - 0.75 * 0.49).abs() < 1e-15);
        assert_eq!(lam.method, Method::ClosedForm);
    }

    #[test]
    fn fundamental_ball_ratio() {
        let st = Setting::new(4, 3).unwrap();
        let f = ModelFunction::fundamental(&st, Point::origin(4));
        let r = 0.3;
        let lam = ball_mean(&f, &Point::origin(4), r, &cfg()).unwrap().value;
        let ratio = 4.0 / (5.0 - 4.0 / 3.0);
        assert!((lam / st.phi_m(r) - ratio).abs() < 1e-12);
    }

    #[test]
    fn cylinder_sphere_mean_matches_sampling() {
        let n = 4;
        let o = Point::origin(n);
        let f = ModelFunction::cylindrical(o.clone(), 3, Profile::Power { s: 0.5 }).unwrap();
        let exact = sphere_mean(&f, &o, 0.5, &cfg()).unwrap();
        assert_eq!(exact.method, Method::ClosedForm);
        let mut rng = rng::stream(5, "oracle", 0);
        let samples = 400_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let u = rng::unit_sphere(&mut rng, n);
            acc += f.evaluate(&o.offset(&u, 0.5));
        }
        assert!((acc / samples as f64 - exact.value).abs() < 5e-3 * exact.value.abs());
        // the flat direction does not matter
        let shifted = Point::from_reals(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3, 0.0]).unwrap();
        let g = ModelFunction::cylindrical(shifted, 3, Profile::Power { s: 0.5 }).unwrap();
        assert_eq!(sphere_mean(&g, &o, 0.5, &cfg()).unwrap(), exact);
    }

    #[test]
    fn zonal_matches_monte_carlo() {
        let n = 3;
        let b = Point::from_reals(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::radial(b.clone(), Profile::Log).unwrap();
        let zonal = sphere_mean(&f, &Point::origin(n), 0.5, &cfg()).unwrap();
        assert_eq!(zonal.method, Method::RadialQuadrature);
        let mut rng = rng::stream(9, "oracle", 0);
        let mut acc = 0.0;
        let samples = 200_000;
        for _ in 0..samples {
            let u = rng::unit_sphere(&mut rng, n);
            acc += f.evaluate(&Point::origin(n).offset(&u, 0.5));
        }
        assert!((acc / samples as f64 - zonal.value).abs() < 3e-3);
    }

    #[test]
    fn sup_closed_forms() {
        let n = 3;
        let o = Point::origin(n);
        let cyl = ModelFunction::cylindrical(o.clone(), 2, Profile::Power { s: 0.25 }).unwrap();
        let m = ball_sup(&cyl, &o, 0.4).unwrap();
        assert!((m.value + 0.16f64.powf(-0.25)).abs() < 1e-14);
        let b = Point::from_reals(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let off = ModelFunction::radial(b, Profile::Power { s: 1.0 }).unwrap();
        assert!((ball_sup(&off, &o, 0.5).unwrap().value + 1.0 / 2.25).abs() < 1e-14);
    }

    #[test]
    fn multistart_sup_close_to_truth() {
        let st = Setting::new(3, 1).unwrap();
        let b = Point::from_reals(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::scaled_sum(vec![
            (1.0, ModelFunction::fundamental(&st, Point::origin(3))),
            (2.0, ModelFunction::fundamental(&st, b)),
        ])
        .unwrap();
        let est = ball_sup(&f, &Point::origin(3), 0.2).unwrap();
        assert_eq!(est.method, Method::MultiStart);
        // the maximizer lies on the sphere, off the axis through both poles
        let z = Point::from_reals(&[-0.2, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(est.value >= f.evaluate(&z) - 1e-12);
    }
}
