use num_complex::Complex64;

use super::{complex_determinant, HermitianMatrix};
use crate::error::{Error, Result};

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Mixed discriminant `D(A_1, ..., A_n)` by polarization over all `2^n` subsets,
/// normalized so that `D(A, ..., A) = det A`.
pub fn mixed_discriminant(mats: &[HermitianMatrix]) -> Result<f64> {
    let n = mats.len();
    check_dims(n, mats.iter())?;
    let (unit, scale) = normalize(mats.iter())?;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, m) in unit.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (s, e) in sum.iter_mut().zip(m) {
                    *s += e;
                }
            }
        }
        let sign = if (n - size) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * complex_determinant(n, sum).re;
    }
    Ok(total / factorial(n) * scale)
}

/// Mixed discriminant with repeated arguments: `(A_i, mult_i)` stands for
/// `mult_i` copies of `A_i`, with `sum mult_i = dim`.
///
/// Subsets are grouped by how many copies of each matrix they contain, so the
/// sum runs over `prod (mult_i + 1)` terms instead of `2^n`.
pub fn mixed_discriminant_grouped(groups: &[(&HermitianMatrix, usize)]) -> Result<f64> {
    let groups: Vec<(&HermitianMatrix, usize)> = groups.iter().copied().filter(|(_, k)| *k > 0).collect();
    let n: usize = groups.iter().map(|(_, k)| k).sum();
    check_dims(n, groups.iter().map(|(h, _)| *h))?;
    let mut scale = 1.0;
    let mut unit = Vec::with_capacity(groups.len());
    for (h, k) in &groups {
        let norm = h.frobenius_norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        scale *= norm.powi(*k as i32);
        unit.push(h.entries().iter().map(|z| z / norm).collect::<Vec<_>>());
    }
    let mut counts = vec![0usize; groups.len()];
    let mut total = 0.0;
    loop {
        let size: usize = counts.iter().sum();
        let mut weight = if (n - size) % 2 == 0 { 1.0 } else { -1.0 };
        let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
        for ((c, (_, k)), m) in counts.iter().zip(&groups).zip(&unit) {
            weight *= binomial(*k, *c);
            if *c > 0 {
                let cf = *c as f64;
                for (s, e) in sum.iter_mut().zip(m) {
                    *s += e * cf;
                }
            }
        }
        total += weight * complex_determinant(n, sum).re;

        // odometer over 0..=mult_i
        let mut i = 0;
        loop {
            if i == counts.len() {
                return Ok(total / factorial(n) * scale);
            }
            counts[i] += 1;
            if counts[i] <= groups[i].1 {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn check_dims<'a>(count: usize, mats: impl Iterator<Item = &'a HermitianMatrix>) -> Result<()> {
    if count == 0 {
        return Err(Error::invalid("mixed discriminant needs at least one matrix"));
    }
    for (i, m) in mats.enumerate() {
        if m.dim() != count {
            return Err(Error::invalid(format!(
                "mixed discriminant of {count} matrices needs dimension {count}, argument {i} has {}",
                m.dim()
            )));
        }
    }
    Ok(())
}

fn normalize<'a>(mats: impl Iterator<Item = &'a HermitianMatrix>) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let mut scale = 1.0;
    let mut unit = Vec::new();
    for h in mats {
        let norm = h.frobenius_norm();
        if norm == 0.0 {
            return Ok((unit, 0.0));
        }
        scale *= norm;
        unit.push(h.entries().iter().map(|z| z / norm).collect());
    }
    Ok((unit, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_copies() {
        let i = HermitianMatrix::identity(3);
        let d = mixed_discriminant(&[i.clone(), i.clone(), i.clone()]).unwrap();
        assert!((d - 1.0).abs() < 1e-13);
        let g = mixed_discriminant_grouped(&[(&i, 3)]).unwrap();
        assert!((g - 1.0).abs() < 1e-13);
    }

    #[test]
    fn diagonal_mixed() {
        // D(diag(a), diag(b)) = (a1 b2 + a2 b1)/2
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let b = HermitianMatrix::diagonal(&[3.0, 5.0]);
        let d = mixed_discriminant(&[a.clone(), b.clone()]).unwrap();
        assert!((d - 5.5).abs() < 1e-13);
        let g = mixed_discriminant_grouped(&[(&a, 1), (&b, 1)]).unwrap();
        assert!((g - 5.5).abs() < 1e-13);
    }

    #[test]
    fn wrong_count_rejected() {
        let i = HermitianMatrix::identity(3);
        assert!(mixed_discriminant(&[i.clone(), i.clone()]).is_err());
        assert!(mixed_discriminant_grouped(&[(&i, 2)]).is_err());
    }

    #[test]
    fn zero_argument() {
        let i = HermitianMatrix::identity(2);
        let z = HermitianMatrix::zeros(2);
        assert_eq!(mixed_discriminant(&[i.clone(), z.clone()]).unwrap(), 0.0);
        assert_eq!(mixed_discriminant_grouped(&[(&i, 1), (&z, 1)]).unwrap(), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
