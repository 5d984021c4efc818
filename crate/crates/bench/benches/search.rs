use criterion::{criterion_group, criterion_main, Criterion};
use mstd_core::primes::{search_prime_mstd, CensusOptions, PrimePool};
use mstd_core::search::{find_mstd, SearchOptions};
use std::hint::black_box;

fn bench_enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    g.bench_function("n6_d20", |b| {
        b.iter(|| find_mstd(black_box(6), 20, SearchOptions::default()).unwrap())
    });
    g.bench_function("n8_d14", |b| {
        b.iter(|| find_mstd(black_box(8), 14, SearchOptions::default()).unwrap())
    });
    g.finish();
}

fn bench_census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    let pool = PrimePool::odd(61);
    g.bench_function("odd_primes_to_61", |b| {
        b.iter(|| search_prime_mstd(black_box(&pool), &CensusOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_enumerate, bench_census);
criterion_main!(benches);
