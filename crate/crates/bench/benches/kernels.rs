use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use numrad_bench::{ginibre_fixture, psd_fixture};
use numrad_core::binomial::expand_binomial;
use numrad_core::inequality::{run_suite, SuiteConfig};
use numrad_core::linalg::{hermitian_eig, svd};
use numrad_core::radius::{minimal_numerical_radius, numerical_radius};
use numrad_core::spectral::{ScalarFn, SpectralCalculus};

fn linalg(c: &mut Criterion) {
    let mut group = c.benchmark_group("linalg");
    for n in [4, 8, 16] {
        let a = ginibre_fixture(n);
        let h = a.hermitian_part();
        group.bench_with_input(BenchmarkId::new("svd", n), &a, |b, a| b.iter(|| svd(black_box(a)).unwrap()));
        group.bench_with_input(BenchmarkId::new("hermitian_eig", n), &h, |b, h| {
            b.iter(|| hermitian_eig(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("radius");
    for n in [4, 8, 16] {
        let a = ginibre_fixture(n);
        group.bench_with_input(BenchmarkId::new("w", n), &a, |b, a| b.iter(|| numerical_radius(black_box(a)).unwrap()));
        group.bench_with_input(BenchmarkId::new("w_min", n), &a, |b, a| {
            b.iter(|| minimal_numerical_radius(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let a = psd_fixture(8);
    let f = ScalarFn::power(0.3);
    c.bench_function("spectral/power_8", |b| {
        b.iter(|| SpectralCalculus::new(black_box(&a)).unwrap().apply(&f).unwrap())
    });
}

fn binomial(c: &mut Criterion) {
    let (a, b) = (ginibre_fixture(6), psd_fixture(6));
    c.bench_function("binomial/expand_6x6_n6", |bench| {
        bench.iter(|| expand_binomial(black_box(&a), black_box(&b), 6).unwrap())
    });
}

fn suite(c: &mut Criterion) {
    let config = SuiteConfig::new(1, vec!["all".into()], (2, 6), 5);
    c.bench_function("suite/all_ids_5_trials", |b| b.iter(|| run_suite(black_box(&config)).unwrap()));
}

criterion_group!(benches, linalg, radius, spectral, binomial, suite);
criterion_main!(benches);
