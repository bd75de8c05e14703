use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tie_mzi::figures::fig1b;
use tie_mzi::montecarlo::{run_campaign, CampaignConfig};
use tie_mzi::{Execution, InterferometerConfig, InternalBasis, TieParams};

fn campaign(c: &mut Criterion) {
    let params = TieParams::new(0.5, 3).unwrap();
    let cfg = InterferometerConfig::operating_point().with_deviations(0.1, 0.0);
    let basis = InternalBasis::ramsey();
    let mut group = c.benchmark_group("campaign_1e6");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let mut run = CampaignConfig::new(1_000_000, 7);
        run.execution = exec;
        group.bench_with_input(BenchmarkId::from_parameter(name), &run, |b, run| {
            b.iter(|| black_box(run_campaign(&params, &cfg, &basis, run).unwrap()))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("fig1b_sweep");
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| b.iter(|| black_box(fig1b(1 << 14, exec).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, campaign, sweep);
criterion_main!(benches);
