use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyadic::density::{buck_cover_bound, SetSpec};
use polyadic::distribution::{empirical_cdf, independence_test, ks_distance, ClosedFormCdf};
use polyadic::moments::mean_prefix;
use polyadic::par;
use polyadic::SequenceSpec;

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn run<R>(parallel: bool, f: impl FnOnce() -> R) -> R {
    if parallel {
        f()
    } else {
        par::sequential(f)
    }
}

fn edf_ks(c: &mut Criterion) {
    let spec: SequenceSpec = "sum(vdc(geometric:2),vdc(geometric:3))".parse().unwrap();
    let mut group = c.benchmark_group("edf_ks");
    group.sample_size(10);
    for n in [100_000u64, 1_000_000] {
        for (name, parallel) in modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    run(parallel, || {
                        let edf = empirical_cdf(&spec, n).unwrap();
                        black_box(ks_distance(&edf, &ClosedFormCdf::SumOfTwoUniforms).statistic)
                    })
                })
            });
        }
    }
    group.finish();
}

fn independence(c: &mut Criterion) {
    let specs: Vec<SequenceSpec> = ["vdc(geometric:2)", "vdc(geometric:3)"].iter().map(|s| s.parse().unwrap()).collect();
    let axis: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let grid = vec![axis.clone(), axis];
    let mut group = c.benchmark_group("independence");
    group.sample_size(10);
    for (name, parallel) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| run(parallel, || black_box(independence_test(&specs, &grid, 1_000_000).unwrap().max_deviation)))
        });
    }
    group.finish();
}

fn cover_bound(c: &mut Criterion) {
    let squares = SetSpec::Squares;
    let mut group = c.benchmark_group("buck_cover_bound");
    group.sample_size(10);
    for (name, parallel) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| run(parallel, || black_box(buck_cover_bound(&squares, 1 << 12, 1 << 22).unwrap().0.value)))
        });
    }
    group.finish();
}

fn mean(c: &mut Criterion) {
    let spec: SequenceSpec = "vdc(geometric:3)".parse().unwrap();
    let mut group = c.benchmark_group("mean_prefix");
    group.sample_size(10);
    for (name, parallel) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| run(parallel, || black_box(mean_prefix(&spec, 1 << 20).unwrap().estimate)))
        });
    }
    group.finish();
}

criterion_group!(benches, edf_ks, independence, cover_bound, mean);
criterion_main!(benches);
