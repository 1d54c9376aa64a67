use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dafr_bench::{piecewise, trained};
use dafr_core::{dafr_train_ols, decile_mape_profile, ols_fit, DafrConfig, SegmentRouter};

fn bench_ols(c: &mut Criterion) {
    let mut group = c.benchmark_group("ols_fit");
    for (n, p) in [(200, 5), (2000, 2), (2000, 10)] {
        let ds = piecewise(n, p, 3);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}x{p}")), &ds, |b, ds| {
            b.iter(|| ols_fit(black_box(ds.features()), black_box(ds.target()), 0.0).unwrap())
        });
    }
    group.finish();
}

fn bench_route(c: &mut Criterion) {
    let (ds, model) = trained(2000, 2);
    let query = ds.features().row(17).to_vec();
    c.bench_function("knn_route/2000_refs", |b| {
        b.iter(|| model.router.route(black_box(&query)).unwrap())
    });
    c.bench_function("dafr_score/2000_rows", |b| {
        b.iter(|| model.score(black_box(ds.features())).unwrap())
    });
}

fn bench_train(c: &mut Criterion) {
    let ds = piecewise(2000, 2, 1);
    let cfg = DafrConfig::default();
    c.bench_function("dafr_train/2000x2", |b| {
        b.iter(|| dafr_train_ols(black_box(&ds), 0.0, &cfg).unwrap())
    });
    let (_, model) = trained(2000, 2);
    let yhat = model.baseline.predict(ds.features()).unwrap();
    c.bench_function("decile_profile/2000", |b| {
        b.iter(|| decile_mape_profile(black_box(ds.target()), black_box(&yhat), 10).unwrap())
    });
}

criterion_group!(benches, bench_ols, bench_route, bench_train);
criterion_main!(benches);
