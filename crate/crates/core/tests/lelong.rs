use lelong_core::exponent::{sublevel_volume, CompactRegion};
use lelong_core::lelong::{geometric_grid, lelong_function, lelong_jensen, mean_value_ratios, NuValue};
use lelong_core::{MCConfig, ModelFunction, Point, Setting, SimpleCurrent};
use proptest::prelude::*;

fn setting() -> impl Strategy<Value = Setting> {
    prop_oneof![Just((2, 1)), Just((3, 1)), Just((3, 2)), Just((4, 2)), Just((4, 3))].prop_map(|(n, m)| Setting::new(n, m).unwrap())
}

fn fund_plus_quad(st: &Setting, c: f64, q: f64) -> ModelFunction {
    let n = st.n();
    ModelFunction::scaled_sum(vec![
        (c, ModelFunction::fundamental(st, Point::origin(n))),
        (q, ModelFunction::quadratic(n)),
    ])
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn profiles_of_positive_currents_nondecreasing(st in setting(), c in 0.1f64..3.0, q in 0.0f64..3.0) {
        let f = fund_plus_quad(&st, c, q);
        let t = SimpleCurrent::ddc_power(f, 1).unwrap();
        let radii = geometric_grid(1e-4, 0.8, 12).unwrap();
        let p = lelong_function(&st, &t, &Point::origin(st.n()), &radii, &MCConfig::default()).unwrap();
        for w in p.values.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-9), "{:?}", p.values);
        }
    }

    #[test]
    fn ratio_law_invariant_under_scaling(st in setting(), c in 0.2f64..5.0) {
        let f = ModelFunction::fundamental(&st, Point::origin(st.n())).scaled(c).unwrap();
        let rep = mean_value_ratios(&st, &f, &Point::origin(st.n()), 1.0, &MCConfig::default()).unwrap();
        prop_assert!((rep.ratio.unwrap() - st.mean_ratio()).abs() < 1e-6);
        match rep.q_sphere.nu {
            NuValue::Value(v) => prop_assert!((v - c).abs() < 1e-6 * c),
            NuValue::DoesNotConverge => prop_assert!(false),
        }
    }

    #[test]
    fn jensen_closes_for_closed_currents(st in setting(), c in 0.1f64..3.0, q in 0.1f64..3.0, r1 in 0.05f64..0.3) {
        let f = fund_plus_quad(&st, c, q);
        let t = SimpleCurrent::ddc_power(f, 1).unwrap();
        let rep = lelong_jensen(&st, &t, &Point::origin(st.n()), r1, 2.0 * r1, &MCConfig::default()).unwrap();
        prop_assert!(rep.residual < 1e-6, "{rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sublevel_volume_monotone(x in 0.3f64..0.8, w in 0.5f64..3.0, seed in 0u64..1000) {
        let st = Setting::new(2, 1).unwrap();
        let e = Point::from_reals(&[x, 0.0, 0.0, 0.0]).unwrap();
        let f = ModelFunction::scaled_sum(vec![
            (1.0, ModelFunction::fundamental(&st, Point::origin(2))),
            (w, ModelFunction::fundamental(&st, e)),
        ])
        .unwrap();
        let k = CompactRegion::ball(Point::from_reals(&[0.5 * x, 0.0, 0.0, 0.0]).unwrap(), x).unwrap();
        let cfg = MCConfig::new(seed, 8000);
        let mut last = f64::INFINITY;
        for t in [-5.0, -20.0, -100.0, -1e3] {
            let v = sublevel_volume(&f, &k, t, &cfg).unwrap();
            prop_assert!(v.volume <= last + 3.0 * v.stderr);
            prop_assert!(v.volume <= k.volume() + 3.0 * v.stderr);
            last = v.volume;
        }
    }
}
