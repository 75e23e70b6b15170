use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hypercolour::oracle;
use hypercolour::par::Execution;
use hypercolour::sampler;
use hypercolour::workbench::{self, GenSpec};
use hypercolour::{Overrides, ProjectionScheme, SamplerParams};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn instance(n: usize, edges: usize) -> hypercolour::Hypergraph {
    workbench::generate_instance(&GenSpec {
        n,
        k: 3,
        max_degree: 3,
        edges,
        seed: 7,
        simple: false,
    })
    .unwrap()
}

fn batch_scans(c: &mut Criterion) {
    let h = instance(8, 6);
    let q = 4;
    let scheme = ProjectionScheme::build(q).unwrap();
    let params = SamplerParams::derive(&h, q, 0.25, Overrides::guards_disabled()).unwrap();

    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 64), &exec, |b, &exec| {
            b.iter(|| black_box(sampler::run_batch(&h, &scheme, &params, 1, 64, exec)))
        });
    }
    group.finish();
}

fn oracle_enumeration(c: &mut Criterion) {
    let h = instance(9, 7);
    let lists = oracle::full_lists(h.n(), 4);

    let mut group = c.benchmark_group("oracle_count");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                oracle::fold_proper(&h, &lists, u128::MAX, exec, || 0u64, |a, _| *a += 1, |a, b| a + b)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, batch_scans, oracle_enumeration);
criterion_main!(benches);
