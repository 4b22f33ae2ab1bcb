use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lelong_bench::{fixture_current, fixture_matrix};
use lelong_core::hermitian::{eigenvalues, mixed_discriminant};
use lelong_core::integrate::ball_current_mass;
use lelong_core::{MCConfig, Point};

fn discriminant(c: &mut Criterion) {
    let mut g = c.benchmark_group("mixed_discriminant");
    for n in [2usize, 4, 6] {
        let mats: Vec<_> = (0..n as u64).map(|s| fixture_matrix(n, s)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &mats, |b, mats| b.iter(|| mixed_discriminant(black_box(mats)).unwrap()));
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues");
    for n in [4usize, 8, 16] {
        let h = fixture_matrix(n, 3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| b.iter(|| eigenvalues(black_box(h))));
    }
    g.finish();
}

fn mass(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball_mass");
    g.sample_size(10);
    let a = Point::origin(3);
    let radial = fixture_current("fund()", 3, 2);
    let two_pole = fixture_current("sum(1*fund(), 2*fund(center=1,0,0,0,0,0))", 3, 2);
    let cfg = MCConfig::new(42, 5_000);
    g.bench_function("radial", |b| b.iter(|| ball_current_mass(black_box(&radial), &a, 0.3, &cfg).unwrap()));
    g.bench_function("two_pole_mc", |b| b.iter(|| ball_current_mass(black_box(&two_pole), &a, 0.3, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, discriminant, spectrum, mass);
criterion_main!(benches);
