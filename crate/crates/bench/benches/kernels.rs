//! Criterion benchmarks for the kernels that dominate grid sweeps:
//! singular values (dense and bidiagonal fast path), Hermitian
//! eigenvalues, series arithmetic and contour extraction.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pslab_core::contour::extract_level;
use pslab_core::field::{compute_field, GridSpec};
use pslab_core::linalg::{op_norm_power, psi_eval, support_function};
use pslab_core::matfun::toeplitz_of_series;
use pslab_core::series::{ft_series, sqrt_one_minus_z};
use pslab_core::svd::singular_values;
use pslab_core::{cx, CMatrix, Lcg64};

fn bench_singular_values(c: &mut Criterion) {
    let mut group = c.benchmark_group("singular_values");
    for n in [32usize, 64, 128] {
        let mut rng = Lcg64::new(1);
        let dense = rng.matrix(n, n);
        group.bench_with_input(BenchmarkId::new("dense", n), &dense, |b, m| {
            b.iter(|| singular_values(black_box(m)).unwrap())
        });
        let bidiag = CMatrix::jordan_block(n).minus_scalar(cx(1.5, 0.0));
        group.bench_with_input(BenchmarkId::new("bidiagonal", n), &bidiag, |b, m| {
            b.iter(|| singular_values(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn bench_support_function(c: &mut Criterion) {
    let mut rng = Lcg64::new(2);
    let a = rng.matrix(64, 64);
    c.bench_function("support_function_64", |b| {
        b.iter(|| support_function(black_box(&a), 0.7).unwrap())
    });
}

fn bench_field_sweep(c: &mut Criterion) {
    let a = CMatrix::jordan_block(64);
    let grid = GridSpec::new(-2.0, 2.0, -2.0, 2.0, 24, 24).unwrap();
    c.bench_function("psi_field_j64_24x24", |b| {
        b.iter(|| compute_field(black_box(&a), black_box(&grid)).unwrap())
    });
}

fn bench_psi_point(c: &mut Criterion) {
    let mut rng = Lcg64::new(3);
    let a = rng.matrix(96, 96);
    c.bench_function("psi_eval_dense_96", |b| {
        b.iter(|| psi_eval(black_box(&a), cx(0.3, -0.8)).unwrap())
    });
}

fn bench_series(c: &mut Criterion) {
    c.bench_function("ft_series_256", |b| {
        b.iter(|| ft_series(cx(0.3, 0.05), 256).unwrap())
    });
    let q = sqrt_one_minus_z(1024);
    let m = toeplitz_of_series(&q, 1024).unwrap();
    c.bench_function("toeplitz_norm_power_1024", |b| {
        b.iter(|| op_norm_power(black_box(&m), 1e-8, 10_000).unwrap())
    });
}

fn bench_contour(c: &mut Criterion) {
    let a = CMatrix::diag(&[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 1.0)]);
    let grid = GridSpec::new(-1.5, 2.0, -1.5, 2.0, 129, 129).unwrap();
    let field = compute_field(&a, &grid).unwrap();
    c.bench_function("marching_squares_129", |b| {
        b.iter(|| extract_level(black_box(&field), 0.25).unwrap())
    });
}

fn configured() -> Criterion {
    Criterion::default()
        .sample_size(20)
        .measurement_time(Duration::from_secs(3))
        .warm_up_time(Duration::from_millis(500))
}

criterion_group! {
    name = benches;
    config = configured();
    targets = bench_singular_values, bench_support_function, bench_field_sweep,
              bench_psi_point, bench_series, bench_contour
}
criterion_main!(benches);
