use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use riscap::channel::build_cascade;
use riscap::geometry::{build_positions, SceneConfig};
use riscap::oracle::{exhaustive_best, random_restart_best, QuantizedSearchSpec, Target};
use riscap::sim::{run_plan_with, SimulationPlan};
use riscap::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    for (n_t, n_r, n_ris) in [(8, 4, 50), (16, 4, 100)] {
        let mut plan = SimulationPlan::paper(n_t, n_r, n_ris);
        plan.trials = 200;
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("{n_t}x{n_r}x{n_ris}")),
                &plan,
                |b, plan| b.iter(|| run_plan_with(plan, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let cfg = SceneConfig::paper(2, 2, 3);
    let ch = build_cascade(&build_positions(&cfg).unwrap(), &cfg).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("exhaustive_64", name), |b| {
            b.iter(|| {
                exhaustive_best(&ch, &QuantizedSearchSpec::new(64, Target::Joint), exec).unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("restarts_64", name), |b| {
            b.iter(|| random_restart_best(&ch, Target::Joint, 64, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, oracle);
criterion_main!(benches);
