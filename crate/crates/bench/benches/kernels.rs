use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gclkit::gcl::{aevi_increments, dvoldt_trimap, ifmv_cell, ifmv_nlfd, ifmv_trimap};
use gclkit::hex_volume;
use gclkit::spectral::SpectralOperator;
use gclkit_bench::{case2_trajectory, sample_cell};

fn cell_kernels(c: &mut Criterion) {
    let (r, u) = sample_cell();
    c.bench_function("hex_volume", |b| b.iter(|| hex_volume(black_box(&r))));
    c.bench_function("trimap_cell", |b| b.iter(|| ifmv_cell(black_box(&r), black_box(&u))));
    c.bench_function("dvoldt_trimap", |b| b.iter(|| dvoldt_trimap(black_box(&r), black_box(&u))));
}

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("differentiate");
    for n in [1usize, 5, 20] {
        let op = SpectralOperator::new(n, 1.0).unwrap();
        let s: Vec<f64> = op.instants().iter().map(|t| (6.0 * t).sin() + t * t).collect();
        g.bench_with_input(BenchmarkId::new("fourier", n), &s, |b, s| b.iter(|| op.differentiate(s).unwrap()));
        g.bench_with_input(BenchmarkId::new("matrix", n), &s, |b, s| b.iter(|| op.apply_ts(s).unwrap()));
    }
    g.finish();
}

fn mesh_pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group("mesh");
    g.sample_size(10);
    for n in [2usize, 10] {
        let (mesh, tr) = case2_trajectory(n);
        g.bench_with_input(BenchmarkId::new("aevi_nlfd", n), &n, |b, _| {
            b.iter(|| ifmv_nlfd(&aevi_increments(&mesh, &tr).decompose()))
        });
        g.bench_with_input(BenchmarkId::new("trimap", n), &n, |b, _| b.iter(|| ifmv_trimap(&mesh, &tr)));
    }
    g.finish();
}

criterion_group!(benches, cell_kernels, spectral, mesh_pipelines);
criterion_main!(benches);
