use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use steerlab::bound::BruteForce;
use steerlab::graph::Preset;
use steerlab::noise::{sweep, SweepConfig};
use steerlab::tensor::random_mixed;
use steerlab::witness::spec_from_graph;
use steerlab::{Execution, QuditRegister};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    group.sample_size(10);
    for preset in [Preset::Chain { n: 4, d: 2 }, Preset::Box4 { d: 3 }] {
        let spec = spec_from_graph(&preset.graph().unwrap()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, preset), &spec, |b, spec| {
                b.iter(|| BruteForce::new().exec(exec).run_spec(black_box(spec)).unwrap())
            });
        }
    }
    group.finish();
}

fn robustness_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let config = SweepConfig { kind: "chain".into(), n_values: vec![3, 4, 5, 6], d_values: vec![2, 3, 4] };
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| sweep(black_box(&config), exec).unwrap()));
    }
    group.finish();
}

fn kernel_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_batch");
    let (graph, _) = Preset::Chain { n: 4, d: 3 }.build().unwrap();
    let spec = spec_from_graph(&graph).unwrap();
    let reg = QuditRegister::uniform(4, 3).unwrap();
    let states: Vec<_> = (0..32).map(|s| random_mixed(&reg, s).unwrap()).collect();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(&states, |rho| spec.evaluate(rho).unwrap()).iter().sum::<f64>())
        });
    }
    group.finish();
}

criterion_group!(benches, brute_force, robustness_sweep, kernel_batch);
criterion_main!(benches);
