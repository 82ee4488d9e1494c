use criterion::{criterion_group, criterion_main, Criterion};
use monothetic::{density_witness, evaluate, evaluate_truncated, k_sequence, ratio};
use monothetic_bench::{element, rank_one_table};
use std::hint::black_box;

fn construction(c: &mut Criterion) {
    c.bench_function("k_sequence 200", |b| b.iter(|| k_sequence(black_box(200)).unwrap()));
    c.bench_function("build table 50", |b| b.iter(|| rank_one_table(black_box(50))));
}

fn evaluation(c: &mut Criterion) {
    let table = rank_one_table(50);
    let eps = ratio(1, 1024);
    let mut group = c.benchmark_group("evaluate");
    for k in [1i64, 2, 3, 5] {
        let x = element(1, k);
        group.bench_function(format!("k={k}"), |b| b.iter(|| evaluate(&table, black_box(&x), &eps).unwrap()));
    }
    group.finish();

    c.bench_function("evaluate_truncated N=50", |b| {
        let x = element(-2, 3);
        b.iter(|| evaluate_truncated(&table, black_box(&x), 50).unwrap())
    });
    c.bench_function("density_witness (5,5)", |b| b.iter(|| density_witness(&table, 5, 5, &eps).unwrap()));
}

criterion_group!(benches, construction, evaluation);
criterion_main!(benches);
