use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex dimension `n` and positivity index `m`, with `1 <= m < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Setting {
    n: usize,
    m: usize,
}

impl Setting {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSetting(format!("complex dimension n = {n} must be at least 2")));
        }
        if m < 1 || m >= n {
            return Err(Error::InvalidSetting(format!("need 1 <= m < n, got n = {n}, m = {m}")));
        }
        Ok(Setting { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n/m - 1`, the power of the fundamental solution in `|z|^2`.
    pub fn fundamental_power(&self) -> f64 {
        self.n as f64 / self.m as f64 - 1.0
    }

    /// The radial weight `phi_m(r) = -r^{-2(n/m-1)} / (n/m-1)`.
    pub fn phi_m(&self, r: f64) -> f64 {
        let s = self.fundamental_power();
        -r.powf(-2.0 * s) / s
    }

    /// Normalizing exponent `(2n/m)(m+p-n)` of the m-Lelong function for bidimension `p`.
    pub fn lelong_exponent(&self, p: usize) -> Result<f64> {
        if self.m + p < self.n {
            return Err(Error::invalid(format!(
                "bidimension p = {p} violates m + p >= n for n = {}, m = {}",
                self.n, self.m
            )));
        }
        Ok(2.0 * self.n as f64 / self.m as f64 * (self.m + p - self.n) as f64)
    }

    /// `nm/(n-m)`, the exponent attained by the fundamental solution.
    pub fn critical_exponent(&self) -> f64 {
        (self.n * self.m) as f64 / (self.n - self.m) as f64
    }

    /// `n/(n-m)`, the universal lower bound for integrability exponents.
    pub fn lower_exponent(&self) -> f64 {
        self.n as f64 / (self.n - self.m) as f64
    }

    /// `n/(n+1-n/m)`: limit ratio of ball means to sphere means against `phi_m`.
    pub fn mean_ratio(&self) -> f64 {
        let n = self.n as f64;
        n / (n + 1.0 - n / self.m as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(Setting::new(3, 3).is_err());
        assert!(Setting::new(3, 0).is_err());
        assert!(Setting::new(1, 1).is_err());
        assert!(Setting::new(4, 2).is_ok());
    }

    #[test]
    fn phi_m_matches_formula() {
        let s = Setting::new(4, 2).unwrap();
        assert_eq!(s.phi_m(1.0), -1.0);
        assert!((s.phi_m(0.5) + 4.0).abs() < 1e-12);
        assert_eq!(s.critical_exponent(), 4.0);
    }
}
