//! Benchmarks for the tally-based bounds and their supporting passes.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use relmetric::{
    distance_bound, distance_bound_sampled, kappa_value, min_weight_exact, synth,
    PartitionedRelation, SplitMix64,
};

fn bench_kappa_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("kappa_value");
    for n in [100usize, 316, 1000] {
        let mut rng = SplitMix64::new(n as u64);
        let r1 = synth::random_relation(n, n, 0.5, &mut rng);
        let r2 = synth::random_relation(n, n, 0.5, &mut rng);
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &n, |b, _| {
            b.iter(|| kappa_value(&r1, &r2).unwrap())
        });
    }
    group.finish();
}

fn bench_partition(c: &mut Criterion) {
    let mut rng = SplitMix64::new(2);
    let r = synth::random_relation(1000, 1000, 0.5, &mut rng);
    c.bench_function("partition_1000x1000", |b| {
        b.iter(|| PartitionedRelation::new(&r))
    });
}

fn bench_distance_bound(c: &mut Criterion) {
    let mut rng = SplitMix64::new(3);
    let r1 = synth::random_relation(1000, 1000, 0.5, &mut rng);
    let r2 = synth::random_relation(1000, 1000, 0.5, &mut rng);
    c.bench_function("distance_bound_1000x1000", |b| {
        b.iter(|| distance_bound(&r1, &r2).unwrap())
    });
}

fn bench_sampled_bound(c: &mut Criterion) {
    let mut rng = SplitMix64::new(4);
    let pool = synth::pattern_pool(3000, 40, 50, &mut rng);
    let r1 = synth::relation_from_pool(3000, 2000, &pool, "a", &mut rng);
    let r2 = synth::relation_from_pool(3000, 2000, &pool, "b", &mut rng);
    c.bench_function("sampled_bound_3000x2000_draw1000", |b| {
        b.iter(|| distance_bound_sampled(&r1, &r2, 1000, 7).unwrap())
    });
}

fn bench_exact_search(c: &mut Criterion) {
    let mut rng = SplitMix64::new(5);
    let r1 = synth::random_relation(6, 6, 0.5, &mut rng);
    let r2 = synth::random_relation(6, 7, 0.5, &mut rng);
    c.bench_function("min_weight_exact_6x6_to_6x7", |b| {
        b.iter(|| min_weight_exact(&r1, &r2).unwrap())
    });
}

criterion_group!(
    benches,
    bench_kappa_scaling,
    bench_partition,
    bench_distance_bound,
    bench_sampled_bound,
    bench_exact_search
);
criterion_main!(benches);
