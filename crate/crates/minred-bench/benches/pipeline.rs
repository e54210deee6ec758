use criterion::{criterion_group, criterion_main, Criterion};
use minred_bench::{cases, factor_input};
use minred_core::matrixlab::{slope_factors, verify_reduction};
use minred_core::oracle::brute_min_admissible;
use minred_core::polyring::slope_factorize;
use minred_core::rtmin;
use minred_core::Family;

fn reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("rtmin");
    for case in cases() {
        group.bench_function(case.name, |b| b.iter(|| rtmin::compute(&case.poly, case.group).unwrap()));
    }
    group.finish();
}

fn realization(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_reduction");
    group.sample_size(10);
    for case in cases() {
        let expected = rtmin::compute(&case.poly, case.group).unwrap().result;
        let factors = slope_factors(&case.poly).unwrap();
        if verify_reduction(&factors, case.group, &expected).is_err() {
            continue;
        }
        group.bench_function(case.name, |b| b.iter(|| verify_reduction(&factors, case.group, &expected).unwrap()));
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for case in cases().into_iter().filter(|c| matches!(c.group.family, Family::B | Family::D)) {
        group.bench_function(case.name, |b| b.iter(|| brute_min_admissible(&case.poly, case.group).unwrap()));
    }
    group.finish();
}

fn factorization(c: &mut Criterion) {
    let p = factor_input();
    let mut group = c.benchmark_group("slope_factorize");
    group.sample_size(10);
    group.bench_function("three slopes, degree 10", |b| b.iter(|| slope_factorize(&p, 42, false).unwrap()));
    group.finish();
}

criterion_group!(benches, reduction, realization, oracle, factorization);
criterion_main!(benches);
