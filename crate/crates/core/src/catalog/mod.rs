//! Model functions with closed-form complex Hessians.
//!
//! Every entry is built from one-variable profiles `g` applied to
//! `|z - c|^2` (radial) or to `|z' - c'|^2` over the first `k` coordinates
//! (cylindrical), combined in nonnegative sums. The profiles are
//! `-t^{-s}`, `log t` and `c0 + c1 t`.

mod classify;
mod entries;
mod grammar;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::setting::Setting;

pub use classify::{msh_classify, MshClass};
pub use entries::{catalog, CatalogEntry, Iota, KnownFacts, Provenance};
pub use grammar::{parse_function_spec, render_current, render_function, Spec};

/// A point of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<Complex64>,
}

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Point { coords }
    }

    pub fn origin(n: usize) -> Self {
        Point { coords: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Builds a point from `2n` reals, real and imaginary parts interleaved.
    pub fn from_reals(reals: &[f64]) -> Result<Self> {
        if reals.is_empty() || reals.len() % 2 != 0 {
            return Err(Error::invalid(format!("a point needs an even number of reals, got {}", reals.len())));
        }
        Ok(Point { coords: reals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect() })
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Distance between the projections onto the first `k` coordinates.
    pub fn partial_distance(&self, other: &Point, k: usize) -> f64 {
        self.coords[..k].iter().zip(&other.coords[..k]).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self + t * direction`, with `direction` given as `2n` reals.
    pub fn offset(&self, direction: &[f64], t: f64) -> Point {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, z)| z + Complex64::new(direction[2 * j], direction[2 * j + 1]) * t)
            .collect();
        Point { coords }
    }

    /// `self + t * e_1`, the representative point used by symmetric reductions.
    pub fn along_first_axis(&self, t: f64) -> Point {
        let mut p = self.clone();
        p.coords[0] += t;
        p
    }
}

/// One-variable profile `g`, applied to a squared distance `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    /// `g(t) = -t^{-s}`, `s > 0`.
    Power { s: f64 },
    /// `g(t) = log t`.
    Log,
    /// `g(t) = c0 + c1 t`.
    Affine { c0: f64, c1: f64 },
}

impl Profile {
    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Semantic(format!("power profile needs s > 0, got {s}")));
        }
        Ok(Profile::Power { s })
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Profile::Power { s } => {
                if t <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -t.powf(-s)
                }
            }
            Profile::Log => {
                if t <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    t.ln()
                }
            }
            Profile::Affine { c0, c1 } => c0 + c1 * t,
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match *self {
            Profile::Power { s } => s * t.powf(-s - 1.0),
            Profile::Log => 1.0 / t,
            Profile::Affine { c1, .. } => c1,
        }
    }

    pub fn d2(&self, t: f64) -> f64 {
        match *self {
            Profile::Power { s } => -s * (s + 1.0) * t.powf(-s - 2.0),
            Profile::Log => -1.0 / (t * t),
            Profile::Affine { .. } => 0.0,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, Profile::Affine { .. })
    }

    pub fn is_nondecreasing(&self) -> bool {
        match *self {
            Profile::Affine { c1, .. } => c1 >= 0.0,
            _ => true,
        }
    }

    /// Smallest `t >= 0` with `g(t) >= v`, or `None` if `g < v` everywhere.
    pub fn inverse(&self, v: f64) -> Option<f64> {
        match *self {
            Profile::Power { s } => (v < 0.0).then(|| (-v).powf(-1.0 / s)),
            Profile::Log => Some(v.exp()),
            Profile::Affine { c0, c1 } => {
                if c1 > 0.0 {
                    Some(((v - c0) / c1).max(0.0))
                } else if c0 >= v {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }

    /// `(c, kappa)` with `g'(t) ~ c t^kappa` as `t -> 0`.
    pub fn derivative_asymptotics(&self) -> Option<(f64, f64)> {
        match *self {
            Profile::Power { s } => Some((s, -s - 1.0)),
            Profile::Log => Some((1.0, -1.0)),
            Profile::Affine { c1, .. } => (c1 != 0.0).then_some((c1, 0.0)),
        }
    }

    /// Growth order `s` with `|g(t)| ~ t^{-s}` near the pole (`0` for log).
    pub fn singular_order(&self) -> Option<f64> {
        match *self {
            Profile::Power { s } => Some(s),
            Profile::Log => Some(0.0),
            Profile::Affine { .. } => None,
        }
    }
}

/// An affine pole subspace `{ z : z_j = anchor_j for j < k }`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    pub anchor: Point,
    pub k: usize,
}

impl PoleSet {
    pub fn distance(&self, z: &Point) -> f64 {
        z.partial_distance(&self.anchor, self.k)
    }

    /// Closest point of the pole set to `z`.
    pub fn nearest(&self, z: &Point) -> Point {
        let mut coords = z.coords().to_vec();
        coords[..self.k].copy_from_slice(&self.anchor.coords()[..self.k]);
        Point::new(coords)
    }

    pub fn is_point(&self) -> bool {
        self.k == self.anchor.dim()
    }
}

/// A catalog function. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFunction {
    /// `g(|z - center|^2)`.
    Radial { center: Point, profile: Profile },
    /// `g(|z' - center'|^2)` over the first `k` coordinates, `1 <= k < n`.
    Cylindrical { center: Point, k: usize, profile: Profile },
    /// `sum c_i f_i` with `c_i >= 0`.
    ScaledSum(Vec<(f64, ModelFunction)>),
}

/// A flattened building block: `coef * g(|P_k(z - center)|^2)`.
#[derive(Debug, Clone, Copy)]
pub struct Term<'a> {
    pub coef: f64,
    pub center: &'a Point,
    pub k: usize,
    pub profile: &'a Profile,
}

impl Term<'_> {
    fn squared_distance(&self, z: &Point) -> f64 {
        self.center.coords()[..self.k]
            .iter()
            .zip(&z.coords()[..self.k])
            .map(|(c, w)| (w - c).norm_sqr())
            .sum()
    }

    pub fn value(&self, z: &Point) -> f64 {
        let v = self.profile.value(self.squared_distance(z));
        if self.coef == 0.0 {
            0.0
        } else {
            self.coef * v
        }
    }

    pub fn on_pole(&self, z: &Point) -> bool {
        self.profile.is_singular() && self.squared_distance(z) == 0.0
    }

    /// The unscaled building block as a function.
    pub fn to_function(&self) -> ModelFunction {
        if self.k == self.center.dim() {
            ModelFunction::Radial { center: self.center.clone(), profile: *self.profile }
        } else {
            ModelFunction::Cylindrical { center: self.center.clone(), k: self.k, profile: *self.profile }
        }
    }

    fn accumulate_hessian(&self, z: &Point, out: &mut [Complex64], n: usize) {
        let t = self.squared_distance(z);
        let g1 = self.coef * self.profile.d1(t);
        let g2 = self.coef * self.profile.d2(t);
        let w: Vec<Complex64> = (0..self.k).map(|j| z.coords()[j] - self.center.coords()[j]).collect();
        for j in 0..self.k {
            out[j * n + j] += g1;
            if g2 != 0.0 {
                for l in 0..self.k {
                    out[j * n + l] += w[j].conj() * w[l] * g2;
                }
            }
        }
    }
}

impl ModelFunction {
    pub fn radial(center: Point, profile: Profile) -> Result<Self> {
        if let Profile::Power { s } = profile {
            Profile::power(s)?;
        }
        Ok(ModelFunction::Radial { center, profile })
    }

    pub fn cylindrical(center: Point, k: usize, profile: Profile) -> Result<Self> {
        if k < 1 || k >= center.dim() {
            return Err(Error::Semantic(format!("cylindrical block size k = {k} needs 1 <= k < n = {}", center.dim())));
        }
        match profile {
            Profile::Power { s } => {
                Profile::power(s)?;
            }
            Profile::Log => {}
            Profile::Affine { .. } => return Err(Error::Semantic("cylindrical profiles are power or log".into())),
        }
        Ok(ModelFunction::Cylindrical { center, k, profile })
    }

    pub fn scaled_sum(terms: Vec<(f64, ModelFunction)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Semantic("empty sum".into()));
        };
        let n = first.1.dim();
        for (c, f) in &terms {
            if !(*c >= 0.0) || !c.is_finite() {
                return Err(Error::Semantic(format!("sum coefficients must be finite and nonnegative, got {c}")));
            }
            if f.dim() != n {
                return Err(Error::Semantic("sum terms have different dimensions".into()));
            }
        }
        Ok(ModelFunction::ScaledSum(terms))
    }

    /// `c * self` as a one-term sum.
    pub fn scaled(self, c: f64) -> Result<Self> {
        Self::scaled_sum(vec![(c, self)])
    }

    /// The fundamental solution `-(1/(n/m-1)) |z - center|^{-2(n/m-1)}`.
    pub fn fundamental(setting: &Setting, center: Point) -> Self {
        let s = setting.fundamental_power();
        ModelFunction::ScaledSum(vec![(1.0 / s, ModelFunction::Radial { center, profile: Profile::Power { s } })])
    }

    /// `|z|^2` on `C^n`.
    pub fn quadratic(n: usize) -> Self {
        ModelFunction::Radial { center: Point::origin(n), profile: Profile::Affine { c0: 0.0, c1: 1.0 } }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelFunction::Radial { center, .. } | ModelFunction::Cylindrical { center, .. } => center.dim(),
            ModelFunction::ScaledSum(terms) => terms.first().map_or(0, |(_, f)| f.dim()),
        }
    }

    pub fn terms(&self) -> Vec<Term<'_>> {
        let mut out = Vec::new();
        self.collect_terms(1.0, &mut out);
        out
    }

    fn collect_terms<'a>(&'a self, scale: f64, out: &mut Vec<Term<'a>>) {
        match self {
            ModelFunction::Radial { center, profile } => {
                out.push(Term { coef: scale, center, k: center.dim(), profile })
            }
            ModelFunction::Cylindrical { center, k, profile } => out.push(Term { coef: scale, center, k: *k, profile }),
            ModelFunction::ScaledSum(terms) => {
                for (c, f) in terms {
                    f.collect_terms(scale * c, out);
                }
            }
        }
    }

    pub fn evaluate(&self, z: &Point) -> f64 {
        self.terms().iter().map(|t| t.value(z)).sum()
    }

    pub fn on_pole(&self, z: &Point) -> bool {
        self.terms().iter().any(|t| t.coef > 0.0 && t.on_pole(z))
    }

    /// `(d^2 f / dz_j dzbar_k)_{jk}` at `z`.
    pub fn complex_hessian(&self, z: &Point) -> Result<HermitianMatrix> {
        let n = self.dim();
        if z.dim() != n {
            return Err(Error::invalid(format!("point has dimension {}, function has {n}", z.dim())));
        }
        if self.on_pole(z) {
            return Err(Error::SingularPoint(format!("{:?}", z.to_reals())));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for t in self.terms() {
            if t.coef != 0.0 {
                t.accumulate_hessian(z, &mut out, n);
            }
        }
        Ok(HermitianMatrix::symmetrized(n, out))
    }

    /// Pole sets of the singular terms, deduplicated.
    pub fn poles(&self) -> Vec<PoleSet> {
        let mut out: Vec<PoleSet> = Vec::new();
        for t in self.terms() {
            if t.coef > 0.0 && t.profile.is_singular() {
                let p = PoleSet { anchor: t.center.clone(), k: t.k };
                let dup = out.iter().any(|q| q.k == p.k && q.distance(&p.anchor) == 0.0);
                if !dup {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Distance from `z` to the nearest pole set (`inf` if there is none).
    pub fn pole_distance(&self, z: &Point) -> f64 {
        self.poles().iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min)
    }

    /// View as a function of `|P_k(z - a)|` alone, when every term shares the block size `k`
    /// and its center projects onto `a`.
    pub fn symmetric_about(&self, a: &Point) -> Option<SymmetricView> {
        let terms = self.terms();
        let k = terms.first()?.k;
        let mut parts = Vec::with_capacity(terms.len());
        for t in &terms {
            if t.k != k || t.center.partial_distance(a, k) > 1e-14 * (1.0 + a.norm()) {
                return None;
            }
            parts.push((t.coef, *t.profile));
        }
        Some(SymmetricView { k, parts })
    }

    /// Same as [`symmetric_about`](Self::symmetric_about) restricted to full radial symmetry.
    pub fn radial_about(&self, a: &Point) -> Option<SymmetricView> {
        self.symmetric_about(a).filter(|v| v.k == a.dim())
    }
}

/// A function of `t = |P_k(z - a)|^2` only: `g(t) = sum c_i g_i(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricView {
    pub k: usize,
    pub parts: Vec<(f64, Profile)>,
}

impl SymmetricView {
    pub fn value(&self, t: f64) -> f64 {
        self.parts.iter().filter(|(c, _)| *c != 0.0).map(|(c, p)| c * p.value(t)).sum()
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.parts.iter().map(|(c, p)| c * p.d1(t)).sum()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.parts.iter().all(|(_, p)| p.is_nondecreasing())
    }

    pub fn is_constant(&self) -> bool {
        self.parts.iter().all(|(c, p)| *c == 0.0 || matches!(p, Profile::Affine { c1, .. } if *c1 == 0.0))
    }

    /// Leading behavior `g'(t) ~ c t^kappa` as `t -> 0`.
    pub fn derivative_asymptotics(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for (c, p) in &self.parts {
            if *c == 0.0 {
                continue;
            }
            if let Some((a, kappa)) = p.derivative_asymptotics() {
                best = match best {
                    None => Some((c * a, kappa)),
                    Some((b, k0)) if (kappa - k0).abs() < 1e-12 => Some((b + c * a, k0)),
                    Some((_, k0)) if kappa < k0 => Some((c * a, kappa)),
                    other => other,
                };
            }
        }
        best
    }

    /// Strongest singular order among the parts.
    pub fn singular_order(&self) -> Option<f64> {
        self.parts.iter().filter(|(c, _)| *c > 0.0).filter_map(|(_, p)| p.singular_order()).reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(reals: &[f64]) -> Point {
        Point::from_reals(reals).unwrap()
    }

    #[test]
    fn quadratic_value() {
        let f = ModelFunction::quadratic(2);
        assert!((f.evaluate(&pt(&[2.0, 0.0, 0.0, 0.0])) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn fundamental_unit_sphere() {
        let s = Setting::new(3, 2).unwrap();
        let f = ModelFunction::fundamental(&s, Point::origin(3));
        let v = f.evaluate(&pt(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert!((v + 1.0 / 0.5).abs() < 1e-14);
        assert_eq!(f.evaluate(&Point::origin(3)), f64::NEG_INFINITY);
    }

    #[test]
    fn cylindrical_pole() {
        let f = ModelFunction::cylindrical(Point::origin(3), 2, Profile::Power { s: 0.5 }).unwrap();
        assert_eq!(f.evaluate(&pt(&[0.0, 0.0, 0.0, 0.0, 1.0, 2.0])), f64::NEG_INFINITY);
        assert!(f.complex_hessian(&pt(&[0.0, 0.0, 0.0, 0.0, 1.0, 2.0])).is_err());
        assert!(ModelFunction::cylindrical(Point::origin(3), 3, Profile::Log).is_err());
    }

    #[test]
    fn quadratic_hessian_is_identity() {
        let f = ModelFunction::quadratic(3);
        let h = f.complex_hessian(&pt(&[0.3, -1.0, 2.0, 0.1, 0.0, 0.5])).unwrap();
        assert!(h.add_scaled(&HermitianMatrix::identity(3), -1.0).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn negative_sum_coefficient_rejected() {
        let f = ModelFunction::quadratic(2);
        assert!(ModelFunction::scaled_sum(vec![(-1.0, f)]).is_err());
        assert!(Profile::power(0.0).is_err());
    }

    #[test]
    fn poles_deduplicated() {
        let s = Setting::new(3, 1).unwrap();
        let f = ModelFunction::fundamental(&s, Point::origin(3));
        let g = ModelFunction::scaled_sum(vec![(1.0, f.clone()), (2.0, f)]).unwrap();
        assert_eq!(g.poles().len(), 1);
    }

    #[test]
    fn profile_inverse() {
        let p = Profile::Power { s: 2.0 };
        let t = p.inverse(-4.0).unwrap();
        assert!((p.value(t) + 4.0).abs() < 1e-12);
        assert_eq!(p.inverse(1.0), None);
    }
}
