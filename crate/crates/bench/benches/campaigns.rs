use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use filtra::verify::{run_campaign, theorem_demo, CampaignConfig, Suite, TheoremDemoConfig};

fn campaign_benchmark(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for suite in [Suite::Cone, Suite::Quasieq, Suite::Iterated] {
        group.bench_function(suite.name(), |b| {
            let config = CampaignConfig::new(suite, 25, 1);
            b.iter(|| run_campaign(black_box(&config)).unwrap())
        });
    }
    group.finish();
}

fn demo_benchmark(c: &mut Criterion) {
    let mut group = c.benchmark_group("demo");
    group.sample_size(10);
    group.bench_function("k3 single trial", |b| {
        let config = TheoremDemoConfig::new(3, 1, 17);
        b.iter(|| theorem_demo(black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, campaign_benchmark, demo_benchmark);
criterion_main!(benches);
