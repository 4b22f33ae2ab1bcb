use std::f64::consts::PI;

use crate::catalog::{ModelFunction, Point, SymmetricView};
use crate::error::{Error, Result};
use crate::hermitian::{mixed_discriminant_grouped, HermitianMatrix};

/// The function multiplying the wedge product.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Unit,
    Function(ModelFunction),
}

/// `g (dd^c v_1)^{e_1} ... (dd^c v_r)^{e_r} beta^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleCurrent {
    coefficient: Coefficient,
    factors: Vec<(ModelFunction, usize)>,
    beta_power: usize,
    n: usize,
}

/// A current whose coefficient and factors depend only on `|P_k(z - a)|`.
#[derive(Debug, Clone)]
pub struct CurrentSymmetry {
    pub k: usize,
    pub coefficient: Option<SymmetricView>,
    pub factors: Vec<(SymmetricView, usize)>,
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `n!/pi^n`, the density of `beta^n` against Lebesgue measure.
pub(crate) fn beta_volume_density(n: usize) -> f64 {
    factorial(n) / PI.powi(n as i32)
}

impl SimpleCurrent {
    pub fn new(coefficient: Coefficient, factors: Vec<(ModelFunction, usize)>, beta_power: usize) -> Result<Self> {
        let n = match (&coefficient, factors.first()) {
            (_, Some((f, _))) => f.dim(),
            (Coefficient::Function(g), None) => g.dim(),
            (Coefficient::Unit, None) => return Err(Error::invalid("a current needs at least one function")),
        };
        if factors.iter().any(|(f, _)| f.dim() != n) {
            return Err(Error::invalid("factors have different dimensions"));
        }
        if let Coefficient::Function(g) = &coefficient {
            if g.dim() != n {
                return Err(Error::invalid("coefficient dimension differs from the factors"));
            }
        }
        let q: usize = factors.iter().map(|(_, e)| e).sum();
        if q + beta_power > n {
            return Err(Error::invalid(format!("degree q + j = {} exceeds n = {n}", q + beta_power)));
        }
        Ok(SimpleCurrent { coefficient, factors, beta_power, n })
    }

    /// `(dd^c f)^e`.
    pub fn ddc_power(f: ModelFunction, e: usize) -> Result<Self> {
        Self::new(Coefficient::Unit, vec![(f, e)], 0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self) -> &Coefficient {
        &self.coefficient
    }

    pub fn factors(&self) -> &[(ModelFunction, usize)] {
        &self.factors
    }

    pub fn beta_power(&self) -> usize {
        self.beta_power
    }

    /// Total `dd^c` multiplicity `q`.
    pub fn ddc_degree(&self) -> usize {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Bidimension `p = n - q - j`.
    pub fn bidimension(&self) -> usize {
        self.n - self.ddc_degree() - self.beta_power
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.coefficient, Coefficient::Unit)
    }

    /// `dd^c T`, or `None` when it vanishes.
    pub fn ddc(&self) -> Option<SimpleCurrent> {
        let Coefficient::Function(g) = &self.coefficient else {
            return None;
        };
        if self.bidimension() == 0 {
            return None;
        }
        let mut factors = vec![(g.clone(), 1)];
        factors.extend(self.factors.iter().cloned());
        Some(SimpleCurrent { coefficient: Coefficient::Unit, factors, beta_power: self.beta_power, n: self.n })
    }

    /// `T ^ (dd^c f)^e ^ beta^j` with the given extra factor and beta power.
    pub fn wedge(&self, f: ModelFunction, e: usize, extra_beta: usize) -> Result<SimpleCurrent> {
        let mut factors = self.factors.clone();
        factors.push((f, e));
        Self::new(self.coefficient.clone(), factors, self.beta_power + extra_beta)
    }

    /// Copy with a different coefficient.
    pub fn with_coefficient(&self, coefficient: Coefficient) -> SimpleCurrent {
        SimpleCurrent { coefficient, ..self.clone() }
    }

    pub fn coefficient_value(&self, z: &Point) -> f64 {
        match &self.coefficient {
            Coefficient::Unit => 1.0,
            Coefficient::Function(g) => g.evaluate(z),
        }
    }

    /// Points where the coefficient or a factor is singular.
    pub fn on_pole(&self, z: &Point) -> bool {
        self.factors.iter().any(|(f, e)| *e > 0 && f.on_pole(z))
            || matches!(&self.coefficient, Coefficient::Function(g) if g.on_pole(z))
    }

    pub fn pole_distance(&self, z: &Point) -> f64 {
        let mut d = f64::INFINITY;
        for (f, e) in &self.factors {
            if *e > 0 {
                d = d.min(f.pole_distance(z));
            }
        }
        if let Coefficient::Function(g) = &self.coefficient {
            d = d.min(g.pole_distance(z));
        }
        d
    }

    /// Density of `T ^ beta^p` against Lebesgue measure at `z`.
    pub fn density(&self, z: &Point) -> Result<f64> {
        let c = self.coefficient_value(z);
        if !c.is_finite() {
            return Err(Error::SingularPoint(format!("coefficient at {:?}", z.to_reals())));
        }
        Ok(c * self.closed_density(z)?)
    }

    /// Density of the wedge product without the coefficient.
    pub fn closed_density(&self, z: &Point) -> Result<f64> {
        let hessians: Vec<(HermitianMatrix, usize)> = self
            .factors
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(f, e)| f.complex_hessian(z).map(|h| (h, *e)))
            .collect::<Result<_>>()?;
        let identity = HermitianMatrix::identity(self.n);
        let mut groups: Vec<(&HermitianMatrix, usize)> = hessians.iter().map(|(h, e)| (h, *e)).collect();
        let rest = self.n - self.ddc_degree();
        if rest > 0 {
            groups.push((&identity, rest));
        }
        Ok(beta_volume_density(self.n) * mixed_discriminant_grouped(&groups)?)
    }

    /// Symmetric reduction about `a`, if every ingredient shares one block size `k`.
    pub fn symmetry_about(&self, a: &Point) -> Option<CurrentSymmetry> {
        let mut k = None;
        let mut same = |v: &SymmetricView| match k {
            None => {
                k = Some(v.k);
                true
            }
            Some(k0) => k0 == v.k,
        };
        let mut factors = Vec::new();
        for (f, e) in &self.factors {
            if *e == 0 {
                continue;
            }
            let v = f.symmetric_about(a)?;
            if !same(&v) {
                return None;
            }
            factors.push((v, *e));
        }
        let coefficient = match &self.coefficient {
            Coefficient::Unit => None,
            Coefficient::Function(g) => {
                let v = g.symmetric_about(a)?;
                if !v.is_constant() && !same(&v) {
                    return None;
                }
                Some(v)
            }
        };
        Some(CurrentSymmetry { k: k.unwrap_or(self.n), coefficient, factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setting::Setting;

    #[test]
    fn degree_bookkeeping() {
        let st = Setting::new(3, 2).unwrap();
        let f = ModelFunction::fundamental(&st, Point::origin(3));
        let t0 = SimpleCurrent::new(Coefficient::Function(f.clone()), vec![(f.clone(), 1)], 0).unwrap();
        assert_eq!(t0.bidimension(), 2);
        let d = t0.ddc().unwrap();
        assert_eq!(d.ddc_degree(), 2);
        assert!(d.is_closed());
        assert!(d.ddc().is_none());
        assert!(SimpleCurrent::new(Coefficient::Unit, vec![(f, 3)], 1).is_err());
    }

    #[test]
    fn beta_power_density() {
        let t = SimpleCurrent::ddc_power(ModelFunction::quadratic(3), 1).unwrap();
        let z = Point::from_reals(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert!((t.density(&z).unwrap() - 6.0 / PI.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn symmetry_detection() {
        let st = Setting::new(3, 1).unwrap();
        let o = Point::origin(3);
        let b = Point::from_reals(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::fundamental(&st, o.clone());
        let t = SimpleCurrent::ddc_power(f.clone(), 1).unwrap();
        assert_eq!(t.symmetry_about(&o).unwrap().k, 3);
        assert!(t.symmetry_about(&b).is_none());
        let g = ModelFunction::fundamental(&st, b);
        let mixed = SimpleCurrent::new(Coefficient::Function(g), vec![(f, 1)], 0).unwrap();
        assert!(mixed.symmetry_about(&o).is_none());
    }
}
