use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dnb_core::strategy::{procedural_evaluation, value_explicit};
use dnb_core::{enumerate_positions, Oracle, Position};

const POSITIONS: [&str; 4] = ["3+4l+8l", "3^5+4l+8l", "12+10l+6l^3+3", "8l^2+18+6l^9+3+4l^101"];

fn closed_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_form");
    for text in POSITIONS {
        let pos: Position = text.parse().unwrap();
        group.bench_with_input(BenchmarkId::new("explicit", text), &pos, |b, p| {
            b.iter(|| value_explicit(black_box(p)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("procedural", text), &pos, |b, p| {
            b.iter(|| procedural_evaluation(black_box(p)).unwrap().value)
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_cold");
    for text in POSITIONS {
        let pos: Position = text.parse().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(text), &pos, |b, p| {
            b.iter(|| Oracle::new().value(black_box(p)))
        });
    }
    group.finish();
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_positions");
    group.sample_size(10);
    for max in [16u32, 24] {
        let positions: Vec<Position> = enumerate_positions(max).collect();
        group.bench_with_input(BenchmarkId::new("oracle", max), &positions, |b, ps| {
            b.iter(|| {
                let o = Oracle::new();
                ps.iter().map(|p| o.value(p)).sum::<i32>()
            })
        });
        group.bench_with_input(BenchmarkId::new("explicit", max), &positions, |b, ps| {
            b.iter(|| ps.iter().map(|p| value_explicit(p).unwrap()).sum::<i32>())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form, oracle, exhaustive);
criterion_main!(benches);
