use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fgm_crm::aggregate::{discrete_aggregate_fft, mixed_erlang_aggregate};
use fgm_crm::reproduce::{table2_models, table3_model, table5_row, TABLE3_FFT};
use fgm_crm::{expected_s, variance_s, BernoulliDependence, CollectiveRiskModel, Frequency, Severity};

fn moments(c: &mut Criterion) {
    let m = CollectiveRiskModel::new(
        Frequency::poisson(100.0).unwrap(),
        Severity::pareto(2.1, 2200.0).unwrap(),
        BernoulliDependence::Comonotone,
    )
    .unwrap();
    c.bench_function("moments/poisson100_pareto", |b| {
        b.iter(|| (expected_s(black_box(&m)).unwrap(), variance_s(black_box(&m)).unwrap()))
    });
    c.bench_function("moments/table5_row", |b| {
        b.iter(|| table5_row("comonotone", "Ga", "NB", black_box(100.0), 1e-12).unwrap())
    });
}

fn mixed_erlang(c: &mut Criterion) {
    let models = table2_models().unwrap();
    let mut g = c.benchmark_group("mixed_erlang");
    for i in [0, 4, 7] {
        let (label, m) = &models[i];
        g.bench_with_input(BenchmarkId::from_parameter(label), m, |b, m| b.iter(|| mixed_erlang_aggregate(m).unwrap()));
    }
    let poisson = CollectiveRiskModel::new(
        Frequency::poisson(20.0).unwrap(),
        Severity::erlang(3, 0.1).unwrap(),
        BernoulliDependence::alpha_mixture(0.8).unwrap(),
    )
    .unwrap();
    g.bench_function("poisson20_erlang3", |b| b.iter(|| mixed_erlang_aggregate(black_box(&poisson)).unwrap()));
    g.finish();
}

fn fft(c: &mut Criterion) {
    let m = table3_model(BernoulliDependence::Comonotone).unwrap();
    let mut g = c.benchmark_group("fft");
    for len in [TABLE3_FFT, 4 * TABLE3_FFT] {
        g.bench_with_input(BenchmarkId::new("table3_comonotone", len), &len, |b, &len| {
            b.iter(|| discrete_aggregate_fft(&m, len).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, moments, mixed_erlang, fft);
criterion_main!(benches);
