use std::hint::black_box;

use compatamg::transfer::ideal_pair;
use compatamg::{build_pi, catalog_pairs, Anchor, NormSpec, QChoice};
use compatamg_bench::advection_fixture;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const SIZES: [usize; 3] = [32, 64, 128];

fn bench_ideal_pair(c: &mut Criterion) {
    let mut group = c.benchmark_group("ideal_pair");
    for n in SIZES {
        let (a, part) = advection_fixture(n);
        let anchor = Anchor::PfromQ(QChoice::Identity);
        group.bench_with_input(BenchmarkId::new("p_from_identity", n), &n, |b, _| {
            b.iter(|| ideal_pair(black_box(&a), &part, &NormSpec::AstarA, &anchor).unwrap())
        });
    }
    group.finish();
}

fn bench_build_pi(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_pi");
    for n in SIZES {
        let (a, part) = advection_fixture(n);
        let pair = ideal_pair(&a, &part, &NormSpec::Identity, &Anchor::PfromQ(QChoice::Identity))
            .unwrap()
            .pair;
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| build_pi(black_box(&a), &pair).unwrap())
        });
    }
    group.finish();
}

fn bench_catalog(c: &mut Criterion) {
    let (a, part) = advection_fixture(32);
    c.bench_function("catalog_pairs/32", |b| b.iter(|| catalog_pairs(black_box(&a), &part)));
}

criterion_group!(benches, bench_ideal_pair, bench_build_pi, bench_catalog);
criterion_main!(benches);
