use std::hint::black_box;

use adhm_bench::case_points;
use adhm_core::deformation::{d1_matrix, tangent_basis};
use adhm_core::numkernel::rref;
use adhm_core::symplectic::gram;
use adhm_core::Float;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn linear_algebra(c: &mut Criterion) {
    let points = case_points(1);
    let x = &points[0].1;
    let d1 = d1_matrix(x).unwrap();
    let d1f = d1.to_float();
    let mut g = c.benchmark_group("rref_d1");
    g.bench_function("exact", |b| b.iter(|| rref(black_box(&d1))));
    g.bench_function("float", |b| b.iter(|| rref(black_box(&d1f))));
    g.finish();
}

fn per_case(c: &mut Criterion) {
    let points = case_points(1);
    let mut g = c.benchmark_group("tangent_basis");
    for (kind, x) in &points {
        g.bench_with_input(BenchmarkId::new("exact", kind), x, |b, x| b.iter(|| tangent_basis(x).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("gram");
    g.sample_size(20);
    for (kind, x) in &points {
        g.bench_with_input(BenchmarkId::new("exact", kind), x, |b, x| b.iter(|| gram(x).unwrap()));
        let xf = x.convert::<Float>();
        g.bench_with_input(BenchmarkId::new("float", kind), &xf, |b, x| b.iter(|| gram(x).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, linear_algebra, per_case);
criterion_main!(benches);
