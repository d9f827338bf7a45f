use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssf_bench::{ellipse_grid, negative_setup};
use ssf_core::layer::assemble_single_layer;
use ssf_core::oplog::{im_trace_log, random_normal_dissipative};
use ssf_core::specfun::{bessel_jy_seq, hankel1_seq};
use ssf_core::ssf::{xi_at, xi_limit};
use ssf_core::triple_lab::fuzz;
use ssf_core::{c64, ComplexEnergy, EpsSchedule, FuzzSizes, FuzzThresholds, LogRoute};

fn special_functions(c: &mut Criterion) {
    let w = c64::new(7.3, 0.4);
    c.bench_function("bessel_jy_seq/32", |b| b.iter(|| bessel_jy_seq(32, std::hint::black_box(w)).unwrap()));
    c.bench_function("hankel1_seq/32", |b| b.iter(|| hankel1_seq(32, std::hint::black_box(w)).unwrap()));
}

fn assembly(c: &mut Criterion) {
    let z = ComplexEnergy::from_parts(3.0, 0.1).unwrap();
    let mut group = c.benchmark_group("assemble_single_layer");
    for n in [64, 128, 256] {
        let grid = ellipse_grid(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, g| b.iter(|| assemble_single_layer(g, z).unwrap()));
    }
    group.finish();
}

fn operator_log(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = random_normal_dissipative(&mut rng, 64);
    let mut group = c.benchmark_group("im_trace_log/64");
    group.sample_size(20);
    for route in [LogRoute::Eigenvalues, LogRoute::Spectral, LogRoute::Integral] {
        group.bench_function(format!("{route:?}"), |b| b.iter(|| im_trace_log(k.as_ref(), route).unwrap()));
    }
    group.finish();
}

fn xi(c: &mut Criterion) {
    let setup = negative_setup(128);
    let mut group = c.benchmark_group("xi");
    group.sample_size(10);
    group.bench_function("xi_at/128", |b| b.iter(|| xi_at(3.0, 1e-2, &setup).unwrap()));
    group.bench_function("xi_limit/128", |b| b.iter(|| xi_limit(3.0, &EpsSchedule::default(), &setup).unwrap()));
    group.finish();
}

fn krein_fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    group.bench_function("100_trials", |b| b.iter(|| fuzz(0, 100, FuzzSizes::default(), FuzzThresholds::default())));
    group.finish();
}

criterion_group!(benches, special_functions, assembly, operator_log, xi, krein_fuzz);
criterion_main!(benches);
