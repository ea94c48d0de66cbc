//! Batch preparation and multiplication, sequential against the rayon pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use skewps::par::{self, Exec};
use skewps::{random, w_prepare, Mode, PrecisionContext, SkewData, SkewSeries};

fn batch(k: u32, n: usize) -> Vec<(SkewSeries, SkewSeries)> {
    let ctx = PrecisionContext::new(3, k, Mode::Integral).unwrap();
    let sd = SkewData::new(&ctx, &BigInt::from(4)).unwrap();
    let mut rng = random::rng(7);
    (0..n)
        .map(|i| (random::series_with_order(&sd, 1 + i % 3, &mut rng), random::series(&sd, &mut rng)))
        .collect()
}

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    if cfg!(feature = "parallel") {
        v.push(("parallel", Exec::Parallel));
    }
    v
}

fn prepare(c: &mut Criterion) {
    let mut group = c.benchmark_group("prepare_batch");
    group.sample_size(10);
    for k in [6u32, 10] {
        let work = batch(k, 32);
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, k), &work, |b, work| {
                b.iter(|| par::map(exec, work.clone(), |(f, _)| w_prepare(&f).unwrap()))
            });
        }
    }
    group.finish();
}

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul_batch");
    group.sample_size(10);
    for k in [6u32, 10] {
        let work = batch(k, 32);
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, k), &work, |b, work| {
                b.iter(|| par::map(exec, work.clone(), |(f, g)| f.mul(&g).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, prepare, multiply);
criterion_main!(benches);
