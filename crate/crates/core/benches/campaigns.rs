use bohrlab::par::Execution;
use bohrlab::radii::{Params, TheoremId};
use bohrlab::witnesses::{falsify, CampaignSettings};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn campaigns(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_thm_d_200_trials");
    group.sample_size(10);
    for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let settings = CampaignSettings {
            trials: 200,
            execution,
            ..CampaignSettings::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &settings, |b, s| {
            b.iter(|| falsify(TheoremId::ThmD, Params::with_k(2.0), s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, campaigns);
criterion_main!(benches);
