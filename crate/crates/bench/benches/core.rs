//! Benchmarks for the hot paths: exact distribution construction, the two
//! samplers, Hall-Littlewood evaluation, and the line-orbit oracle.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use unispec_core::growth::{borodin_sample, coin_sample, empirical_distribution, SamplerSpec};
use unispec_core::lines::brute_force_line_orbits;
use unispec_core::matrix::jordan_matrix;
use unispec_core::measures::{gl_unipotent_dist, triangular_dist};
use unispec_core::partition::Partition;
use unispec_core::qseries::{hl_evaluate, inv_pow};

fn distributions(c: &mut Criterion) {
    c.bench_function("gl_unipotent_dist n=12 p=2", |b| {
        b.iter(|| gl_unipotent_dist(black_box(12), black_box(2)).unwrap())
    });
    c.bench_function("triangular_dist n=10 p=2", |b| {
        b.iter(|| triangular_dist(black_box(10), black_box(2)).unwrap())
    });
}

fn samplers(c: &mut Criterion) {
    let mut seed = 0u64;
    c.bench_function("borodin_sample n=20 p=2", |b| {
        b.iter_batched(
            || {
                seed = seed.wrapping_add(1);
                seed
            },
            |s| borodin_sample(black_box(20), 2, s).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("coin_sample p=2 limit=64", |b| {
        b.iter_batched(
            || {
                seed = seed.wrapping_add(1);
                seed
            },
            |s| coin_sample(2, s, black_box(64)).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("empirical borodin n=6 p=2 x10000", |b| {
        b.iter(|| {
            empirical_distribution(&SamplerSpec::Borodin { n: 6, p: 2 }, black_box(10_000), 1)
                .unwrap()
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let lambda = Partition::new(vec![2, 1, 1]);
    let xs: Vec<_> = (1..=8).map(|i| inv_pow(2, i)).collect();
    let t = inv_pow(2, 1);
    c.bench_function("hl_evaluate (2,1,1) on 8 vars", |b| {
        b.iter(|| hl_evaluate(black_box(&lambda), black_box(&xs), black_box(&t)).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let m = jordan_matrix(&Partition::new(vec![3, 2, 1]), 2).unwrap();
    c.bench_function("line orbits of J(3,2,1) over F_2", |b| {
        b.iter(|| brute_force_line_orbits(black_box(&m)).unwrap())
    });
}

criterion_group!(benches, distributions, samplers, evaluation, oracles);
criterion_main!(benches);
