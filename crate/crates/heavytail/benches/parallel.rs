//! Parallel vs sequential throughput for batch sampling and identity checks.
//!
//! `draw_batch` runs on the rayon pool when the default `parallel` feature is
//! on; `draw_batch_seq` is the always-available single-thread path producing
//! identical output. Run with `cargo bench -p heavytail`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heavytail::linnik::{Linnik, LinnikMethod, LinnikParams};
use heavytail::rng::{draw_batch, draw_batch_seq};
use heavytail::stable::SymStable;
use heavytail::stattest::ks_two_sample;

fn bench_linnik_batch(c: &mut Criterion) {
    let linnik =
        Linnik::new(LinnikParams::new(1.0).unwrap(), LinnikMethod::NormalMl).unwrap();
    let mut group = c.benchmark_group("linnik_batch_64k");
    group.sample_size(20);
    let n = 1 << 16;
    group.bench_function(BenchmarkId::new("parallel", n), |b| {
        b.iter(|| draw_batch(n, 7, 0, |rng| linnik.sample(rng)))
    });
    group.bench_function(BenchmarkId::new("sequential", n), |b| {
        b.iter(|| draw_batch_seq(n, 7, 0, |rng| linnik.sample(rng)))
    });
    group.finish();
}

fn bench_stable_batch(c: &mut Criterion) {
    let sym = SymStable::new(0.8).unwrap();
    let mut group = c.benchmark_group("sym_stable_batch_256k");
    group.sample_size(20);
    let n = 1 << 18;
    group.bench_function(BenchmarkId::new("parallel", n), |b| {
        b.iter(|| draw_batch(n, 7, 0, |rng| sym.sample(rng)))
    });
    group.bench_function(BenchmarkId::new("sequential", n), |b| {
        b.iter(|| draw_batch_seq(n, 7, 0, |rng| sym.sample(rng)))
    });
    group.finish();
}

fn bench_subordination_identity(c: &mut Criterion) {
    let sym = SymStable::new(1.0).unwrap();
    let sub = heavytail::stable::PosStable::new(0.5).unwrap();
    let mut group = c.benchmark_group("subordination_ks_100k");
    group.sample_size(10);
    let n = 100_000;
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let a = draw_batch(n, 3, 0, |rng| sym.sample(rng));
            let bb = draw_batch(n, 3, 1 << 32, |rng| {
                heavytail::elementary::sample_normal(rng) * (2.0 * sub.sample(rng)).sqrt()
            });
            ks_two_sample(&a, &bb).unwrap()
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let a = draw_batch_seq(n, 3, 0, |rng| sym.sample(rng));
            let bb = draw_batch_seq(n, 3, 1 << 32, |rng| {
                heavytail::elementary::sample_normal(rng) * (2.0 * sub.sample(rng)).sqrt()
            });
            ks_two_sample(&a, &bb).unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_linnik_batch,
    bench_stable_batch,
    bench_subordination_identity
);
criterion_main!(benches);
