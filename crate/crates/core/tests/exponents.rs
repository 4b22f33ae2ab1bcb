use lelong_core::catalog::{Iota, Profile};
use lelong_core::exponent::{compact_infimum, integrability_exponent, tail_exponent, CompactRegion};
use lelong_core::{MCConfig, ModelFunction, Point, Setting};

fn e1(n: usize, x: f64) -> Point {
    let mut r = vec![0.0; 2 * n];
    r[0] = x;
    Point::from_reals(&r).unwrap()
}

fn both(phi: &ModelFunction, k: &CompactRegion) -> (f64, f64) {
    let cfg = MCConfig::default();
    let t = tail_exponent(phi, k, &cfg).unwrap().iota.finite().unwrap();
    let s = integrability_exponent(phi, k, &cfg).unwrap().iota.finite().unwrap();
    (t, s)
}

#[test]
fn cylinder_exceeds_critical_exponent() {
    let (n, m) = (4, 2);
    let f = ModelFunction::cylindrical(Point::origin(n), n - 1, Profile::Power { s: (n - 1) as f64 / m as f64 - 1.0 }).unwrap();
    let k = CompactRegion::ball(Point::origin(n), 0.5).unwrap();
    let (t, s) = both(&f, &k);
    assert!((t - 6.0).abs() < 0.3, "{t}");
    assert!((s - 6.0).abs() < 0.1, "{s}");
}

#[test]
fn two_pole_sum_takes_smaller_exponent() {
    let st = Setting::new(3, 2).unwrap();
    let n = 3;
    // exponents 6 at the origin, n / 0.25 = 12 at e1
    let f = ModelFunction::scaled_sum(vec![
        (1.0, ModelFunction::fundamental(&st, Point::origin(n))),
        (1.0, ModelFunction::radial(e1(n, 1.0), Profile::Power { s: 0.25 }).unwrap()),
    ])
    .unwrap();
    let k = CompactRegion::ball(e1(n, 0.5), 0.75).unwrap();
    let cfg = MCConfig::default();
    let rep = compact_infimum(&f, &k, &[Point::origin(n), e1(n, 1.0)], &cfg).unwrap();
    let per: Vec<f64> = rep.per_point.iter().map(|p| p.1.iota.finite().unwrap()).collect();
    assert!((per[0] - 6.0).abs() < 0.1 && (per[1] - 12.0).abs() < 0.2, "{per:?}");
    assert!(rep.consistent, "{rep:?}");
    let (t, s) = both(&f, &k);
    assert!((t / 6.0 - 1.0).abs() < 0.05 && (s / 6.0 - 1.0).abs() < 0.05, "{t} {s}");
}

#[test]
fn scaling_leaves_exponent_unchanged() {
    let st = Setting::new(2, 1).unwrap();
    let k = CompactRegion::ball(Point::origin(2), 0.5).unwrap();
    let f = ModelFunction::fundamental(&st, Point::origin(2));
    for c in [0.5, 2.0] {
        let g = f.clone().scaled(c).unwrap();
        let (t, s) = both(&g, &k);
        assert!((t - 2.0).abs() < 1e-6 && (s - 2.0).abs() < 2e-3, "{c}: {t} {s}");
    }
}

#[test]
fn bounded_entry_unbounded() {
    let g = ModelFunction::radial(Point::origin(3), Profile::Affine { c0: -1.0, c1: 1.0 }).unwrap();
    let k = CompactRegion::ball(Point::origin(3), 0.5).unwrap();
    let cfg = MCConfig::default();
    assert_eq!(integrability_exponent(&g, &k, &cfg).unwrap().iota, Iota::Unbounded);
    assert_eq!(tail_exponent(&g, &k, &cfg).unwrap().iota, Iota::Unbounded);
}
