use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use etaq_bench::wide_series;
use etaq_core::{eigen_check, parse, QSeries};

fn euler(c: &mut Criterion) {
    let mut group = c.benchmark_group("euler_product");
    for prec in [10_000usize, 1_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(prec), &prec, |b, &prec| {
            b.iter(|| QSeries::euler_product(1, black_box(prec)))
        });
    }
    group.finish();
}

fn dense_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_mul_100_bits");
    group.sample_size(10);
    for prec in [2_000usize, 20_000] {
        let a = wide_series(prec, 100, 1);
        let b = wide_series(prec, 100, 2);
        group.bench_with_input(BenchmarkId::from_parameter(prec), &prec, |bench, _| {
            bench.iter(|| black_box(&a).mul(black_box(&b)))
        });
    }
    group.finish();
}

fn expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_expansion");
    group.sample_size(10);
    for (text, prec) in [("8:3", 100_000usize), ("1:2,2:2,6:3", 100_000)] {
        let q = parse(text).unwrap();
        group.bench_function(text, |b| b.iter(|| q.q_expansion(black_box(prec)).unwrap()));
    }
    group.finish();
}

fn certify(c: &mut Criterion) {
    let q = parse("eta(8z)^3").unwrap();
    let mut group = c.benchmark_group("eigen_check");
    group.sample_size(10);
    group.bench_function("eta(8z)^3 cap 30", |b| {
        b.iter(|| eigen_check(&q, Some(30)).unwrap())
    });
    group.bench_function("eta(8z)^3 full", |b| {
        b.iter(|| eigen_check(&q, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, euler, dense_mul, expansion, certify);
criterion_main!(benches);
