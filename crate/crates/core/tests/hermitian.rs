use approx::assert_relative_eq;
use lelong_core::hermitian::{binomial, eigenvalues, mixed_discriminant, mixed_discriminant_grouped, sigma_k};
use lelong_core::HermitianMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        HermitianMatrix::from_fn(n, |j, k| match j.cmp(&k) {
            std::cmp::Ordering::Equal => Complex64::new(v[j * n + j], 0.0),
            std::cmp::Ordering::Less => Complex64::new(v[j * n + k], v[k * n + j]),
            std::cmp::Ordering::Greater => Complex64::new(v[k * n + j], -v[j * n + k]),
        })
        .unwrap()
    })
}

fn sized() -> impl Strategy<Value = (usize, Vec<HermitianMatrix>)> {
    (2usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(hermitian(n), n)))
}

fn to_nalgebra(h: &HermitianMatrix) -> DMatrix<Complex64> {
    let n = h.dim();
    DMatrix::from_fn(n, n, |j, k| h.get(j, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra((_, hs) in sized()) {
        let h = &hs[0];
        let mut oracle: Vec<f64> = to_nalgebra(h).symmetric_eigen().eigenvalues.iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        let ours = eigenvalues(h).values;
        for (a, b) in ours.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{ours:?} vs {oracle:?}");
        }
    }

    #[test]
    fn eigenvalues_shift((_, hs) in sized(), c in -3.0f64..3.0) {
        let a = eigenvalues(&hs[0]).values;
        let b = eigenvalues(&hs[0].shifted(c)).values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x + c - y).abs() < 1e-9);
        }
    }

    #[test]
    fn diagonal_discriminant_is_determinant((_, hs) in sized()) {
        let h = &hs[0];
        let n = h.dim();
        let d = mixed_discriminant(&vec![h.clone(); n]).unwrap();
        let det = to_nalgebra(h).determinant().re;
        prop_assert!((d - det).abs() < 1e-9 * (1.0 + det.abs()), "{d} vs {det}");
    }

    #[test]
    fn identity_padding_gives_sigma_k((n, hs) in sized(), k in 1usize..=5) {
        let k = k.min(n);
        let a = &hs[0];
        let id = HermitianMatrix::identity(n);
        let d = mixed_discriminant_grouped(&[(a, k), (&id, n - k)]).unwrap();
        let s = eigenvalues(a).sigma(k) / binomial(n, k);
        prop_assert!((d - s).abs() < 1e-9 * (1.0 + s.abs()), "{d} vs {s}");
        prop_assert!((sigma_k(a, k).unwrap() - eigenvalues(a).sigma(k)).abs() < 1e-9 * (1.0 + s.abs()));
    }

    #[test]
    fn discriminant_symmetric((_, hs) in sized(), rot in 0usize..5) {
        let d = mixed_discriminant(&hs).unwrap();
        let mut p = hs.clone();
        p.rotate_left(rot % hs.len());
        p.swap(0, hs.len() - 1);
        let e = mixed_discriminant(&p).unwrap();
        prop_assert!((d - e).abs() < 1e-10 * (1.0 + d.abs()));
    }

    #[test]
    fn discriminant_multilinear((n, hs) in sized(), b in hermitian(5), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let b = HermitianMatrix::from_fn(n, |j, k| b.get(j, k)).unwrap();
        let mix = hs[0].scaled(x).add_scaled(&b, y).unwrap();
        let mut with_mix = hs.clone();
        with_mix[0] = mix;
        let mut with_b = hs.clone();
        with_b[0] = b;
        let lhs = mixed_discriminant(&with_mix).unwrap();
        let rhs = x * mixed_discriminant(&hs).unwrap() + y * mixed_discriminant(&with_b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }
}

#[test]
fn identity_discriminant_is_one() {
    for n in 1..=6 {
        assert_relative_eq!(mixed_discriminant(&vec![HermitianMatrix::identity(n); n]).unwrap(), 1.0, epsilon = 1e-12);
    }
}
