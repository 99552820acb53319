use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qrank_core::quantum::{evolve, evolve_spectral};
use qrank_core::{
    build_dynamical_subspace, classical_pagerank, generate_scale_free, GoogleMatrix,
    SzegedyOperator,
};

const STEPS: usize = 256;

fn quantum_backends(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantum_walk");
    group.sample_size(10);
    for n in [32, 64, 128] {
        let g = generate_scale_free(n, 1).unwrap();
        let op = SzegedyOperator::new(&GoogleMatrix::from_graph(&g, 0.85).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("direct", n), &op, |b, op| {
            b.iter(|| evolve(black_box(op), STEPS).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("spectral", n), &op, |b, op| {
            b.iter(|| {
                evolve_spectral(&build_dynamical_subspace(black_box(op)).unwrap(), STEPS).unwrap()
            })
        });
    }
    group.finish();
}

fn power_method(c: &mut Criterion) {
    let mut group = c.benchmark_group("classical_pagerank");
    for n in [128, 1024, 8192] {
        let g = generate_scale_free(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| classical_pagerank(black_box(g), 0.85).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, quantum_backends, power_method);
criterion_main!(benches);
