use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use ramanujan_pursuit::experiment::run_experiment_with;
use ramanujan_pursuit::pursuit::rsp_with_execution;
use ramanujan_pursuit::{frsp, Execution, ExperimentConfig, Protocol, PursuitConfig, Signal};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn noise(len: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Signal::new((0..len).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

fn rsp_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("rsp");
    for (len, q) in [(512, 64), (2048, 120)] {
        let x = noise(len, 1);
        let cfg = PursuitConfig::new(q).with_iterations(5).with_tolerance(0.0);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("N={len},Q={q}")),
                &x,
                |b, x| b.iter(|| rsp_with_execution(black_box(x), &cfg, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn experiment_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    let mut cfg = ExperimentConfig::new(Protocol::Snr, vec![0.0]);
    cfg.trials = 16;
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "snr 0 dB, 16 trials"), |b| {
            b.iter(|| run_experiment_with(black_box(&cfg), exec).unwrap())
        });
    }
    group.finish();
}

fn frsp_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("frsp");
    let cfg = PursuitConfig::new(60)
        .with_iterations(10)
        .with_tolerance(0.0);
    for len in [1024, 4096, 16384] {
        let x = noise(len, 2);
        group.bench_with_input(BenchmarkId::from_parameter(len), &x, |b, x| {
            b.iter(|| frsp(black_box(x), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, rsp_strategies, experiment_strategies, frsp_scaling);
criterion_main!(benches);
