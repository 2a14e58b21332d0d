use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use queens_bench::random_boards;
use queens_core::{
    central_embedding, complete, complete_via_pipeline, count_completions, min_cover_value, verify_certificate,
    PartialConfig, PipelineParams, SolveBudget, Square,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    let nauck = PartialConfig::new(8, [Square::new(4, 2), Square::new(5, 4)]).unwrap();
    group.bench_function("count_nauck", |b| {
        b.iter(|| count_completions(black_box(&nauck), SolveBudget::default()))
    });
    for n in [16usize, 32, 64] {
        let empty = PartialConfig::empty(n).unwrap();
        group.bench_with_input(BenchmarkId::new("complete_empty", n), &empty, |b, cfg| {
            b.iter(|| complete(black_box(cfg), SolveBudget::default()))
        });
    }
    group.finish();
}

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp");
    group.sample_size(20);
    for n in [8usize, 12, 20] {
        let boards = random_boards(n, n / 2, 8, n as u64);
        group.bench_with_input(BenchmarkId::new("min_cover_value", n), &boards, |b, boards| {
            b.iter(|| {
                for cfg in boards {
                    min_cover_value(black_box(cfg)).unwrap();
                }
            })
        });
    }
    group.finish();
}

fn certificate(c: &mut Criterion) {
    let inst = central_embedding(1747).unwrap();
    let mut group = c.benchmark_group("certificate");
    group.sample_size(10);
    group.bench_function("verify_central_1747", |b| {
        b.iter(|| verify_certificate(black_box(&inst.config), black_box(&inst.certificate)))
    });
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for n in [64usize, 128, 256] {
        let cfg = random_boards(n, n / 60, 1, 7).pop().unwrap();
        group.bench_with_input(BenchmarkId::new("complete", n), &cfg, |b, cfg| {
            b.iter(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                complete_via_pipeline(black_box(cfg), &PipelineParams::default(), &mut rng).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, exact, lp, certificate, pipeline);
criterion_main!(benches);
