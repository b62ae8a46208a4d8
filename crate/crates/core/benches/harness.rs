use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hrpairs::bogomolov::{curvature_trials, CurvatureConfig};
use hrpairs::hrcheck::{sample_search, SearchConfig};
use hrpairs::parallel::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn search(c: &mut Criterion) {
    let config = SearchConfig {
        d: 3,
        e: 3,
        partition: vec![2],
        trials: 32,
        seed: 7,
        tolerance: 1e-9,
    };
    let mut group = c.benchmark_group("sample_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sample_search(&config, exec).unwrap())
        });
    }
    group.finish();
}

fn curvature(c: &mut Criterion) {
    let config = CurvatureConfig {
        d: 3,
        r: 3,
        e: 3,
        trials: 32,
        seed: 7,
        higgs: true,
        tolerance: 1e-9,
    };
    let mut group = c.benchmark_group("curvature_trials");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| curvature_trials(&config, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, search, curvature);
criterion_main!(benches);
