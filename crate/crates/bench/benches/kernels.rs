use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nonmarkov_bench::{default_family, hermitian, probes};
use nonmarkov_core::contractivity::{gamma4_derivative_closed_form, half_open_grid, norm_derivative_scan, ScanConfig};
use nonmarkov_core::divisibility::intermediate_map;
use nonmarkov_core::tol::RANK_CUTOFF;
use nonmarkov_core::trace_norm;

fn linear_algebra(c: &mut Criterion) {
    let x3 = hermitian(3);
    let x9 = hermitian(9);
    c.bench_function("trace_norm d=3", |b| b.iter(|| trace_norm(black_box(&x3))));
    c.bench_function("trace_norm d=9", |b| b.iter(|| trace_norm(black_box(&x9))));
}

fn family_kernels(c: &mut Criterion) {
    let cx = default_family();
    c.bench_function("lambda_t last segment", |b| b.iter(|| cx.lambda_t(black_box(3.7)).unwrap()));
    let m = cx.lambda_t(3.7).unwrap();
    c.bench_function("to_choi", |b| b.iter(|| black_box(&m).to_choi()));
    c.bench_function("intermediate_map image-restricted", |b| {
        b.iter(|| intermediate_map(&cx, black_box(3.0), black_box(4.0), RANK_CUTOFF).unwrap())
    });
    c.bench_function("closed-form derivative", |b| {
        b.iter(|| gamma4_derivative_closed_form(black_box(2.0), black_box(0.3), black_box(1.5)).unwrap())
    });
}

fn scans(c: &mut Criterion) {
    let cx = default_family();
    let set = probes(3, 20);
    let config = ScanConfig::new(half_open_grid(0.0, 4.0, 20));
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("20 probes x 20 points", |b| {
        b.iter(|| norm_derivative_scan(&cx, &set.probes, &config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, linear_algebra, family_kernels, scans);
criterion_main!(benches);
