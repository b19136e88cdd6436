use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use surgery_bench::load;
use surgery_core::dsl::execute;

fn bench_z_pipeline(c: &mut Criterion) {
    let (script, dataset) = load("z_construction.surg");
    c.bench_function("z_construction_n3", |b| {
        b.iter(|| execute(black_box(&script), black_box(&dataset), 3).unwrap())
    });
}

fn bench_ztilde_pipeline(c: &mut Criterion) {
    let (script, dataset) = load("ztilde_construction.surg");
    c.bench_function("ztilde_construction_n3", |b| {
        b.iter(|| execute(black_box(&script), black_box(&dataset), 3).unwrap())
    });
}

criterion_group!(pipeline, bench_z_pipeline, bench_ztilde_pipeline);
criterion_main!(pipeline);
