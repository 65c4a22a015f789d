use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use pnanalyze_bench::near_uniform_line;
use pnanalyze_core::codec::{compress, decompress};

fn codec(c: &mut Criterion) {
    let line = near_uniform_line(100_000);
    let packed = compress(&line).unwrap();
    c.bench_function("compress 100k", |b| b.iter(|| compress(black_box(&line)).unwrap()));
    c.bench_function("decompress 100k", |b| b.iter(|| decompress(black_box(&packed)).unwrap()));
}

criterion_group!(benches, codec);
criterion_main!(benches);
