use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use irgcp::contact::{batch_with, InitialSet};
use irgcp::exec::Execution;
use irgcp::graph::{glue_star_path, sample_er};

fn replica_batches(c: &mut Criterion) {
    let er = sample_er(200, 6.0, 1).unwrap();
    let glued = glue_star_path(8, 6).unwrap();
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for (name, g, lambda) in [("er200", &er, 0.3), ("glued8x6", &glued, 0.8)] {
        for (mode, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &exec| {
                b.iter(|| batch_with(black_box(g), lambda, &InitialSet::Full, 256, 1e5, 7, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, replica_batches);
criterion_main!(benches);
