use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use psieve_core::pairs::{iterate, ExponentPair};
use psieve_core::{bracket_functional, richert_integral, triple_integral};

fn quadrature(c: &mut Criterion) {
    c.bench_function("richert_integral", |b| b.iter(|| richert_integral(black_box(2.93), 0.341, 1e-10).unwrap()));
    let mut group = c.benchmark_group("triple_integral");
    group.sample_size(10);
    group.bench_function("tol_1e-8", |b| b.iter(|| triple_integral(black_box(1e-8)).unwrap()));
    group.finish();
    c.bench_function("bracket_functional", |b| b.iter(|| bracket_functional(black_box(0.9989445), 1e-9).unwrap()));
}

fn pairs(c: &mut Criterion) {
    let half = ExponentPair::half();
    c.bench_function("iterate_AAAAAA", |b| b.iter(|| iterate(black_box("AAAAAA"), &half).unwrap()));
}

criterion_group!(benches, quadrature, pairs);
criterion_main!(benches);
