use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use supercong::arith::{rat, PadicContext};
use supercong::hyperseries::{truncated_3f2, truncated_3f2_mod};
use supercong::padic::gamma_p;
use supercong::theorems::verify_theorem2;

fn series(c: &mut Criterion) {
    let a = rat(-1, 3);
    let mut g = c.benchmark_group("truncated_3f2");
    for n in [97u64, 291, 500] {
        let ctx = PadicContext::new(97, 2).unwrap();
        g.bench_with_input(BenchmarkId::new("mod_p2", n), &n, |b, &n| {
            b.iter(|| truncated_3f2_mod(black_box(&a), n, &ctx).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exact", n), &n, |b, &n| {
            b.iter(|| truncated_3f2(black_box(&a), n))
        });
    }
    g.finish();
}

fn gamma(c: &mut Criterion) {
    let ctx = PadicContext::new(97, 2).unwrap();
    c.bench_function("gamma_p(-1/6) mod 97^2", |b| {
        b.iter(|| gamma_p(black_box(&rat(-1, 6)), &ctx).unwrap())
    });
}

fn theorem(c: &mut Criterion) {
    c.bench_function("thm2 p=97 a=-1/2 n=4", |b| {
        b.iter(|| verify_theorem2(97, black_box(&rat(-1, 2)), 4).unwrap())
    });
}

criterion_group!(benches, series, gamma, theorem);
criterion_main!(benches);
