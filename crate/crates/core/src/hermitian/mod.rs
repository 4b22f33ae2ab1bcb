//! Dense linear algebra for small Hermitian matrices.
//!
//! Everything here is sized for `n <= 6`: determinants go through LU with
//! partial pivoting, eigenvalues through cyclic Jacobi rotations and mixed
//! discriminants through the polarization sum over subsets.

mod discriminant;
mod jacobi;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use discriminant::{binomial, mixed_discriminant, mixed_discriminant_grouped};
pub use jacobi::eigenvalues;

/// Absolute asymmetry tolerated on ingestion, relative to `max(1, max |h_jk|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Square complex matrix with `h[j][k] == conj(h[k][j])`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermitianMatrix({}x{})", self.dim, self.dim)?;
        for j in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|k| {
                    let z = self.get(j, k);
                    format!("{:+.6e}{:+.6e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl HermitianMatrix {
    /// Validates and symmetrizes `entries` (row-major, `dim * dim`).
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        for j in 0..dim {
            for k in j..dim {
                let a = entries[j * dim + k];
                let b = entries[k * dim + j].conj();
                if (a - b).norm() > HERMITIAN_TOL * scale {
                    return Err(Error::invalid(format!(
                        "matrix is not Hermitian: |h[{j}][{k}] - conj(h[{k}][{j}])| = {:e}",
                        (a - b).norm()
                    )));
                }
            }
        }
        Ok(Self::symmetrized(dim, entries))
    }

    /// `(H + H*)/2` without the asymmetry check; used by closed-form Hessians.
    pub(crate) fn symmetrized(dim: usize, mut entries: Vec<Complex64>) -> Self {
        for j in 0..dim {
            entries[j * dim + j] = Complex64::new(entries[j * dim + j].re, 0.0);
            for k in (j + 1)..dim {
                let avg = 0.5 * (entries[j * dim + k] + entries[k * dim + j].conj());
                entries[j * dim + k] = avg;
                entries[k * dim + j] = avg.conj();
            }
        }
        HermitianMatrix { dim, entries }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|i| f(i / dim, i % dim)).collect();
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        let mut h = Self::zeros(dim);
        for (j, &v) in values.iter().enumerate() {
            h.entries[j * dim + j] = Complex64::new(v, 0.0);
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.dim + k]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|j| self.get(j, j).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        HermitianMatrix { dim: self.dim, entries: self.entries.iter().map(|z| z * c).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &HermitianMatrix, c: f64) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::invalid(format!("dimension mismatch: {} vs {}", self.dim, other.dim)));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b * c).collect();
        Ok(HermitianMatrix { dim: self.dim, entries })
    }

    pub fn shifted(&self, c: f64) -> Self {
        let mut h = self.clone();
        for j in 0..self.dim {
            h.entries[j * self.dim + j] += c;
        }
        h
    }

    /// Determinant by LU with partial pivoting. Real for Hermitian input.
    pub fn determinant(&self) -> f64 {
        complex_determinant(self.dim, self.entries.clone()).re
    }
}

pub(crate) fn complex_determinant(dim: usize, mut a: Vec<Complex64>) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&x, &y| a[x * dim + col].norm().total_cmp(&a[y * dim + col].norm()))
            .unwrap_or(col);
        let p = a[pivot * dim + col];
        if p.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..dim {
                a.swap(pivot * dim + k, col * dim + k);
            }
            det = -det;
        }
        det *= p;
        for row in (col + 1)..dim {
            let factor = a[row * dim + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..dim {
                let v = a[col * dim + k];
                a[row * dim + k] -= factor * v;
            }
        }
    }
    det
}

/// Real eigenvalues sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
}

impl Spectrum {
    /// k-th elementary symmetric function of the eigenvalues (`sigma_0 = 1`).
    pub fn sigma(&self, k: usize) -> f64 {
        elementary_symmetric(&self.values, k)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `sigma_k(values)` by the standard one-pass recurrence.
pub fn elementary_symmetric(values: &[f64], k: usize) -> f64 {
    if k > values.len() {
        return 0.0;
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in values {
        for j in (1..=k).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e[k]
}

/// k-th elementary symmetric function of the eigenvalues of `h`, `1 <= k <= dim`.
pub fn sigma_k(h: &HermitianMatrix, k: usize) -> Result<f64> {
    if k < 1 || k > h.dim() {
        return Err(Error::invalid(format!("k = {k} out of range 1..={}", h.dim())));
    }
    Ok(eigenvalues(h).sigma(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(1.0, 1.0), c(1.0, 1.0), c(2.0, 0.0)]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn symmetrizes_tiny_asymmetry() {
        let h = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(1.0, 1.0), c(1.0, -1.0 + 1e-14), c(2.0, 0.0)]).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(HermitianMatrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn determinant_of_diagonal() {
        let h = HermitianMatrix::diagonal(&[2.0, -3.0, 0.5]);
        assert!((h.determinant() + 3.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_2x2_complex() {
        let h = HermitianMatrix::new(2, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]).unwrap();
        assert!((h.determinant() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn sigma_recurrence() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(elementary_symmetric(&v, 0), 1.0);
        assert_eq!(elementary_symmetric(&v, 1), 6.0);
        assert_eq!(elementary_symmetric(&v, 2), 11.0);
        assert_eq!(elementary_symmetric(&v, 3), 6.0);
        assert_eq!(elementary_symmetric(&v, 4), 0.0);
    }

    #[test]
    fn sigma_k_range_checked() {
        let h = HermitianMatrix::identity(3);
        assert!(sigma_k(&h, 0).is_err());
        assert!(sigma_k(&h, 4).is_err());
        assert!((sigma_k(&h, 1).unwrap() - 3.0).abs() < 1e-14);
    }
}
