//! Parallel vs. sequential throughput for the two data-parallel hot paths:
//! embedding batches of points and assembling constraint systems.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coble_forge_core::coble::{
    assemble_system, assemble_system_seq, SystemKind,
};
use coble_forge_core::monomial::{invariant_basis, MonomialModule};
use coble_forge_core::theta::{
    embedding_batch, embedding_batch_seq, sample_embedded, sample_points, PeriodMatrix,
    DEFAULT_TOL,
};

fn bench_embedding(c: &mut Criterion) {
    let period = PeriodMatrix::random_generic(2, 42).unwrap();
    let points = sample_points(24, &period, 7);
    let mut group = c.benchmark_group("embedding_batch");
    group.bench_with_input(BenchmarkId::new("parallel", 24), &points, |b, pts| {
        b.iter(|| embedding_batch(3, pts, &period, DEFAULT_TOL).unwrap())
    });
    group.bench_with_input(BenchmarkId::new("sequential", 24), &points, |b, pts| {
        b.iter(|| embedding_batch_seq(3, pts, &period, DEFAULT_TOL).unwrap())
    });
    group.finish();
}

fn bench_assembly(c: &mut Criterion) {
    let period = PeriodMatrix::random_generic(2, 42).unwrap();
    let module = MonomialModule::symmetric_power(3, 2, 3).unwrap();
    let basis = invariant_basis(&module).unwrap();
    let points = sample_embedded(3, 40, &period, 7, DEFAULT_TOL).unwrap();
    let mut group = c.benchmark_group("assemble_singularity_system");
    group.bench_function("parallel", |b| {
        b.iter(|| assemble_system(SystemKind::Singularity, &basis, &points).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| assemble_system_seq(SystemKind::Singularity, &basis, &points).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_embedding, bench_assembly);
criterion_main!(benches);
