//! Benchmark fixtures.

use lelong_core::catalog::{parse_function_spec, Spec};
use lelong_core::{HermitianMatrix, Setting, SimpleCurrent};
use num_complex::Complex64;

/// A deterministic dense Hermitian matrix of dimension `n`.
pub fn fixture_matrix(n: usize, salt: u64) -> HermitianMatrix {
    HermitianMatrix::from_fn(n, |j, k| {
        let x = ((j * 7 + k * 13) as u64 ^ salt) as f64;
        if j == k {
            Complex64::new(1.0 + (x * 0.37).sin().abs(), 0.0)
        } else {
            let (lo, hi) = (j.min(k), j.max(k));
            let y = ((lo * 7 + hi * 13) as u64 ^ salt) as f64;
            let im = (y * 0.11).cos() * 0.2;
            Complex64::new((y * 0.23).sin() * 0.3, if j < k { im } else { -im })
        }
    })
    .expect("fixture is hermitian")
}

pub fn fixture_current(text: &str, n: usize, m: usize) -> SimpleCurrent {
    let st = Setting::new(n, m).expect("valid setting");
    match parse_function_spec(text, &st).expect("valid spec") {
        Spec::Current(t) => t,
        Spec::Function(f) => SimpleCurrent::ddc_power(f, st.m()).expect("valid power"),
    }
}
