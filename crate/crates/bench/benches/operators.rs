use std::hint::black_box;

use convfix_bench::{sample_measure, twisted_measure, GROUPS};
use convfix_core::fixed_point::{convolution_matrix, fixed_subspace, verify_fixed_points, EngineOptions};
use convfix_core::measure::{cesaro_limit, CesaroOptions};
use convfix_core::ComplexMeasure;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for spec in GROUPS {
        let (a, b) = (sample_measure(spec, 1), sample_measure(spec, 2));
        group.bench_with_input(BenchmarkId::from_parameter(spec), &(a, b), |bench, (a, b)| {
            bench.iter(|| black_box(a).convolve(black_box(b)).unwrap())
        });
    }
    group.finish();
}

fn operator_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolution_matrix");
    for spec in GROUPS {
        let w = sample_measure(spec, 3);
        group.bench_with_input(BenchmarkId::from_parameter(spec), &w, |bench, w| {
            bench.iter(|| convolution_matrix(black_box(w)))
        });
    }
    group.finish();
}

fn fixed_space(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixed_subspace");
    for spec in GROUPS {
        let w = twisted_measure(spec, 4);
        group.bench_with_input(BenchmarkId::from_parameter(spec), &w, |bench, w| {
            bench.iter(|| fixed_subspace(black_box(w), 1e-10))
        });
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_fixed_points");
    group.sample_size(20);
    let opts = EngineOptions::default();
    for spec in GROUPS {
        let w = twisted_measure(spec, 5);
        group.bench_with_input(BenchmarkId::from_parameter(spec), &w, |bench, w| {
            bench.iter(|| verify_fixed_points(black_box(w), &opts).unwrap())
        });
    }
    group.finish();
}

fn cesaro(c: &mut Criterion) {
    let mut group = c.benchmark_group("cesaro_limit");
    group.sample_size(20);
    let opts = CesaroOptions::default();
    for spec in GROUPS {
        let w = ComplexMeasure::Finite(twisted_measure(spec, 6));
        group.bench_with_input(BenchmarkId::from_parameter(spec), &w, |bench, w| {
            bench.iter(|| cesaro_limit(black_box(w), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, convolution, operator_matrix, fixed_space, verification, cesaro);
criterion_main!(benches);
