use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qdouble::experiments::{run_error_suppression, run_fusion_stats, FusionConfig, SuppressionConfig};
use qdouble::Execution;

fn schedulers(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        let name = format!("{exec:?}");
        group.bench_with_input(BenchmarkId::new("fusion-stats", &name), &exec, |b, &exec| {
            b.iter(|| run_fusion_stats(&FusionConfig { trials: 500 }, 1, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("suppression-l2", &name), &exec, |b, &exec| {
            let config = SuppressionConfig { ls: vec![2], trials: 100, ..Default::default() };
            b.iter(|| run_error_suppression(&config, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, schedulers);
criterion_main!(benches);
