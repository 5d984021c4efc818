use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mstd_bench::{conway_like, wide_set};
use mstd_core::classify;
use mstd_core::setcore::naive;
use std::hint::black_box;

fn bench_classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    let small = conway_like();
    g.bench_function("bitvec/8", |b| b.iter(|| classify(black_box(&small))));
    g.bench_function("naive/8", |b| b.iter(|| naive::classify(black_box(&small))));
    for len in [32u64, 128, 512] {
        let set = wide_set(len, 3);
        g.bench_with_input(BenchmarkId::new("bitvec", len), &set, |b, s| {
            b.iter(|| classify(black_box(s)))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_classify);
criterion_main!(benches);
