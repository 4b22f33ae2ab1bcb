use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

fn rule(cell: &'static OnceLock<GaussLegendre>, degree: usize) -> &'static GaussLegendre {
    cell.get_or_init(|| GaussLegendre::new(degree.try_into().expect("nonzero degree")))
}

/// 16-node Gauss–Legendre on `[a, b]`.
pub(crate) fn gl16(a: f64, b: f64, f: impl FnMut(f64) -> f64) -> f64 {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    rule(&RULE, 16).integrate(a, b, f)
}

/// 64-node Gauss–Legendre on `[a, b]`.
pub(crate) fn gl64(a: f64, b: f64, f: impl FnMut(f64) -> f64) -> f64 {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    rule(&RULE, 64).integrate(a, b, f)
}

pub(crate) const SHELL_RATIO: f64 = 1.2;
pub(crate) const INNER_FRACTION: f64 = 1e-7;

/// `int_lo^hi f` on a geometric grid accumulating toward `lo`, for integrands singular at `lo`.
///
/// Cells have ratio 1.2 in `x - lo`; the innermost cell has width `1e-7 (hi - lo)`.
pub(crate) fn geometric_integral(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let width = hi - lo;
    if width <= 0.0 {
        return 0.0;
    }
    let inner = INNER_FRACTION * width;
    let mut total = gl16(lo, lo + inner, &mut f);
    let mut a = inner;
    while a < width {
        let b = (a * SHELL_RATIO).min(width);
        total += gl16(lo + a, lo + b, &mut f);
        a = b;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact() {
        assert!((gl16(0.0, 2.0, |x| x.powi(5)) - 64.0 / 6.0).abs() < 1e-12);
        assert!((gl64(-1.0, 1.0, |x| x * x) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn singular_power() {
        let v = geometric_integral(0.0, 1.0, |x| x.powf(-0.5));
        assert!((v - 2.0).abs() < 1e-3, "{v}");
        let w = geometric_integral(0.0, 2.0, |x| x.powf(0.5));
        assert!((w - 2f64.powf(1.5) / 1.5).abs() < 1e-9, "{w}");
    }
}
