use rayon::prelude::*;

use super::{ball_volume, centered_term, CompactRegion};
use crate::catalog::{ModelFunction, Point};
use crate::error::{Error, Result};
use crate::integrate::mass::shell_measure;
use crate::integrate::rng::{shell_radius, stream, unit_sphere};
use crate::integrate::MCConfig;

/// Dyadic shells per anchor; the innermost has radius `2^-SHELLS` of the outermost.
pub(crate) const SHELLS: usize = 48;
/// Deterministic nodes per shell on the closed-form path.
const NODES: usize = 64;

/// A weighted point: `weight` is the volume it represents, `value` is `phi` there.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub log_weight: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Shell {
    pub outer: f64,
    pub volume: f64,
    pub draws: usize,
    pub nodes: Vec<Node>,
}

/// Shells around each anchor, covering the region once (each point belongs to its nearest anchor).
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub anchors: Vec<Vec<Shell>>,
}

impl Layout {
    pub fn build(phi: &ModelFunction, region: &CompactRegion, cfg: &MCConfig) -> Result<Self> {
        if let Some((coef, k, profile, radius)) = centered_term(phi, region) {
            return Ok(Self::closed(phi.dim(), coef, k, &profile, radius));
        }
        let poles = phi.poles();
        if poles.iter().any(|p| !p.is_point()) {
            return Err(Error::invalid("cylindrical poles are supported only as a single term centred in a single ball"));
        }
        let mut anchors: Vec<Point> = poles.into_iter().map(|p| p.anchor).collect();
        if anchors.is_empty() {
            anchors = region.balls().iter().map(|b| b.0.clone()).collect();
        }
        let draws = (cfg.samples_per_shell / 4).max(256);
        let shells = anchors
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let outer = region.balls().iter().map(|(c, r)| a.distance(c) + r).fold(0.0, f64::max);
                (0..=SHELLS)
                    .into_par_iter()
                    .map(|j| {
                        let hi = outer * 0.5f64.powi(j as i32);
                        let lo = if j == SHELLS { 0.0 } else { 0.5 * hi };
                        let n = phi.dim();
                        let volume = ball_volume(n, hi) - ball_volume(n, lo);
                        let mut rng = stream(cfg.seed, "sublevel", ((i as u64) << 8) | j as u64);
                        let log_weight = (volume / draws as f64).ln();
                        let nodes = (0..draws)
                            .filter_map(|_| {
                                let dir = unit_sphere(&mut rng, n);
                                let z = a.offset(&dir, shell_radius(&mut rng, n, lo, hi));
                                let own = a.distance(&z);
                                let nearest = anchors.iter().enumerate().all(|(l, b)| {
                                    let d = b.distance(&z);
                                    if l < i { d > own } else { d >= own }
                                });
                                (nearest && region.contains(&z)).then(|| Node { log_weight, value: phi.evaluate(&z) })
                            })
                            .collect();
                        Shell { outer: hi, volume, draws, nodes }
                    })
                    .collect()
            })
            .collect();
        Ok(Layout { anchors: shells })
    }

    /// Midpoint nodes in `log u` on dyadic shells of the transverse distance `u`.
    fn closed(n: usize, coef: f64, k: usize, profile: &crate::catalog::Profile, radius: f64) -> Self {
        let step = 2f64.ln() / NODES as f64;
        let shells = (0..SHELLS)
            .map(|j| {
                let hi = radius * 0.5f64.powi(j as i32);
                let lo = 0.5 * hi;
                let nodes: Vec<Node> = (0..NODES)
                    .map(|i| {
                        let u = lo * ((i as f64 + 0.5) * step).exp();
                        Node { log_weight: (shell_measure(n, k, u, radius) * u * step).ln(), value: coef * profile.value(u * u) }
                    })
                    .collect();
                Shell { outer: hi, volume: nodes.iter().map(|x| x.log_weight.exp()).sum(), draws: NODES, nodes }
            })
            .collect();
        Layout { anchors: vec![shells] }
    }

    /// Monte Carlo volume of `{phi <= t}` with its standard error.
    pub fn sublevel(&self, t: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut var = 0.0;
        for s in self.anchors.iter().flatten() {
            let hits = s.nodes.iter().filter(|x| x.value <= t).count() as f64;
            let f = hits / s.draws as f64;
            v += s.volume * f;
            var += s.volume * s.volume * f * (1.0 - f) / s.draws as f64;
        }
        (v, var.sqrt())
    }

    /// `log int_shell |phi|^c` for each shell of each anchor (`-inf` for empty shells).
    pub fn log_shell_integrals(&self, c: f64) -> Vec<Vec<(f64, f64)>> {
        self.anchors
            .iter()
            .map(|shells| {
                shells
                    .iter()
                    .map(|s| {
                        let terms: Vec<f64> = s
                            .nodes
                            .iter()
                            .filter(|x| x.value != 0.0 && x.value.is_finite())
                            .map(|x| x.log_weight + c * x.value.abs().ln())
                            .collect();
                        (s.outer, log_sum_exp(&terms))
                    })
                    .collect()
            })
            .collect()
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_stable() {
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn closed_layout_volume() {
        let st = crate::Setting::new(2, 1).unwrap();
        let f = ModelFunction::fundamental(&st, Point::origin(2));
        let k = CompactRegion::ball(Point::origin(2), 0.5).unwrap();
        let l = Layout::build(&f, &k, &MCConfig::default()).unwrap();
        assert_eq!(l.anchors[0][0].draws, NODES);
        let v: f64 = l.anchors[0].iter().map(|s| s.volume).sum();
        assert!((v / k.volume() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn shells_partition_region() {
        let st = crate::Setting::new(2, 1).unwrap();
        let e = Point::from_reals(&[0.3, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::scaled_sum(vec![
            (1.0, ModelFunction::fundamental(&st, Point::origin(2))),
            (1.0, ModelFunction::fundamental(&st, e)),
        ])
        .unwrap();
        let k = CompactRegion::ball(Point::origin(2), 0.5).unwrap();
        let l = Layout::build(&f, &k, &MCConfig::default()).unwrap();
        let (v, se) = l.sublevel(f64::INFINITY);
        assert!((v - k.volume()).abs() < 4.0 * se, "{v} {se} {}", k.volume());
    }
}
