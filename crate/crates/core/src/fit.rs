//! Least-squares helpers: straight lines and the offset power law `y = y0 + C x^gamma`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares `y = intercept + slope x`. Needs at least two distinct `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - rss / syy };
    let slope_stderr = if n > 2 { (rss / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Some(LinearFit { slope, intercept, r_squared, slope_stderr })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerFit {
    /// Limit as `x -> 0`.
    pub y0: f64,
    pub c: f64,
    pub gamma: f64,
    /// Root mean square residual.
    pub rms: f64,
}

pub const GAMMA_MIN: f64 = 0.05;
pub const GAMMA_MAX: f64 = 4.0;

fn fixed_gamma(x: &[f64], y: &[f64], gamma: f64) -> Option<(f64, f64, f64)> {
    let xs: Vec<f64> = x.iter().map(|v| v.powf(gamma)).collect();
    let f = linear_fit(&xs, y)?;
    let rss: f64 = xs.iter().zip(y).map(|(a, b)| (b - f.intercept - f.slope * a).powi(2)).sum();
    Some((f.intercept, f.slope, rss))
}

/// Fits `y = y0 + C x^gamma` with `gamma` in `[0.05, 4]`.
pub fn fit_power_offset(x: &[f64], y: &[f64]) -> Option<PowerFit> {
    const GRID: usize = 200;
    let lg = |i: f64| (GAMMA_MIN.ln() + (GAMMA_MAX / GAMMA_MIN).ln() * i / GRID as f64).exp();
    let rss = |g: f64| fixed_gamma(x, y, g).map_or(f64::INFINITY, |v| v.2);
    let best = (0..=GRID).map(|i| (i, rss(lg(i as f64)))).min_by(|a, b| a.1.total_cmp(&b.1))?;
    // golden section on log gamma inside the neighboring grid cells
    let (mut lo, mut hi) = (lg(best.0 as f64 - 1.0).ln().max(GAMMA_MIN.ln()), lg(best.0 as f64 + 1.0).ln().min(GAMMA_MAX.ln()));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if rss(a.exp()) <= rss(b.exp()) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let gamma = (0.5 * (lo + hi)).exp();
    let gamma = if rss(gamma) <= best.1 { gamma } else { lg(best.0 as f64) };
    let (y0, c, r) = fixed_gamma(x, y, gamma)?;
    Some(PowerFit { y0, c, gamma, rms: (r / x.len() as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn recovers_offset_power() {
        let x: Vec<f64> = (0..8).map(|i| 1e-3 * 1.5f64.powi(i)).collect();
        let y: Vec<f64> = x.iter().map(|r| 0.7 - 2.0 * r.powf(1.3)).collect();
        let f = fit_power_offset(&x, &y).unwrap();
        assert!((f.y0 - 0.7).abs() < 1e-8, "{f:?}");
        assert!((f.gamma - 1.3).abs() < 1e-4, "{f:?}");
    }
}
