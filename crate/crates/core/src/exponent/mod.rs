//! Integrability exponents: sublevel-volume tail slopes and direct integral scans.

mod sampler;
mod scan;
mod tail;

use std::f64::consts::PI;

use serde::Serialize;

use crate::catalog::{Iota, ModelFunction, Point};
use crate::error::{Error, Result};
use crate::integrate::mass::shell_measure;

pub use scan::{bounds_report, compact_infimum, integrability_exponent, BoundsReport, CompactInfimumReport};
pub use tail::{sublevel_volume, tail_exponent, SublevelEstimate, TailFit, TailReport};

/// Closed ball or finite union of pairwise disjoint closed balls.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactRegion {
    balls: Vec<(Point, f64)>,
}

impl CompactRegion {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        Self::union(vec![(center, radius)])
    }

    pub fn union(balls: Vec<(Point, f64)>) -> Result<Self> {
        let Some(n) = balls.first().map(|b| b.0.dim()) else {
            return Err(Error::invalid("region needs at least one ball"));
        };
        for (i, (c, r)) in balls.iter().enumerate() {
            if c.dim() != n {
                return Err(Error::invalid("balls of different dimensions"));
            }
            if !(*r > 0.0 && r.is_finite()) {
                return Err(Error::invalid(format!("ball radius must be positive, got {r}")));
            }
            for (d, s) in &balls[..i] {
                if c.distance(d) <= r + s {
                    return Err(Error::invalid("balls of a region must be disjoint"));
                }
            }
        }
        Ok(CompactRegion { balls })
    }

    pub fn balls(&self) -> &[(Point, f64)] {
        &self.balls
    }

    pub fn dim(&self) -> usize {
        self.balls[0].0.dim()
    }

    pub fn volume(&self) -> f64 {
        self.balls.iter().map(|(_, r)| ball_volume(self.dim(), *r)).sum()
    }

    pub fn contains(&self, z: &Point) -> bool {
        self.balls.iter().any(|(c, r)| c.distance(z) <= *r)
    }

    /// Whether some pole of `phi` meets the region.
    pub fn meets_pole(&self, phi: &ModelFunction) -> bool {
        phi.poles().iter().any(|p| self.balls.iter().any(|(c, r)| p.distance(c) <= *r))
    }

    pub fn to_reals(&self) -> Vec<(Vec<f64>, f64)> {
        self.balls.iter().map(|(c, r)| (c.to_reals(), *r)).collect()
    }
}

impl Serialize for CompactRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Ball {
            center: Vec<f64>,
            radius: f64,
        }
        let balls: Vec<Ball> = self.to_reals().into_iter().map(|(center, radius)| Ball { center, radius }).collect();
        balls.serialize(s)
    }
}

pub(crate) fn ball_volume(n: usize, r: f64) -> f64 {
    PI.powi(n as i32) / crate::integrate::factorial(n) * r.powi(2 * n as i32)
}

/// `(coef, k, profile)` when `phi` is one term whose pole passes through the center of the single ball of `region`.
pub(crate) fn centered_term(phi: &ModelFunction, region: &CompactRegion) -> Option<(f64, usize, crate::catalog::Profile, f64)> {
    let terms = phi.terms();
    let [t] = terms.as_slice() else { return None };
    let [(c, r)] = region.balls() else { return None };
    (t.coef > 0.0 && t.profile.is_singular() && c.partial_distance(t.center, t.k) == 0.0).then(|| (t.coef, t.k, *t.profile, *r))
}

pub(crate) fn tube_volume(n: usize, k: usize, rho: f64, radius: f64) -> f64 {
    if k == n {
        return ball_volume(n, rho.min(radius));
    }
    crate::integrate::quadrature::gl64(0.0, rho.min(radius), |u| shell_measure(n, k, u, radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMethod {
    TailSlope,
    IntegralScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentEstimate {
    pub iota: Iota,
    pub method: ExponentMethod,
    pub interval: Option<(f64, f64)>,
}

impl ExponentEstimate {
    pub fn unbounded(method: ExponentMethod) -> Self {
        ExponentEstimate { iota: Iota::Unbounded, method, interval: None }
    }

    /// Half-width of the interval, zero when unbounded.
    pub fn error(&self) -> f64 {
        self.interval.map_or(0.0, |(a, b)| 0.5 * (b - a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_rules() {
        let o = Point::origin(2);
        let e = Point::from_reals(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(CompactRegion::union(vec![(o.clone(), 0.6), (e.clone(), 0.6)]).is_err());
        let k = CompactRegion::union(vec![(o, 0.4), (e, 0.4)]).unwrap();
        assert!((k.volume() - 2.0 * PI * PI / 2.0 * 0.4f64.powi(4)).abs() < 1e-15);
        assert!(CompactRegion::ball(Point::origin(2), 0.0).is_err());
    }

    #[test]
    fn tube_matches_ball_for_full_rank() {
        let a = tube_volume(3, 3, 0.2, 1.0);
        assert!((a - PI.powi(3) / 6.0 * 0.2f64.powi(6)).abs() < 1e-18);
        // whole ball when the tube covers it
        let b = tube_volume(3, 2, 2.0, 1.0);
        assert!((b - ball_volume(3, 1.0)).abs() < 1e-12);
    }
}
