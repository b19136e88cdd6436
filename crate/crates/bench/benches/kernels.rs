use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use surgery_core::{cfrac_expand, is_negative_definite, smith_cokernel, LinearPlumbing};

fn bench_cfrac(c: &mut Criterion) {
    c.bench_function("cfrac_expand_305_17", |b| {
        b.iter(|| cfrac_expand(black_box(305), black_box(17)).unwrap())
    });
}

fn bench_definiteness(c: &mut Criterion) {
    let q = LinearPlumbing::from_pq(305, 17).unwrap().intersection_matrix();
    c.bench_function("negative_definite_33x33", |b| {
        b.iter(|| is_negative_definite(black_box(&q)).unwrap())
    });
}

fn bench_smith(c: &mut Criterion) {
    let q = LinearPlumbing::from_pq(305, 17).unwrap().intersection_matrix();
    c.bench_function("smith_cokernel_33x33", |b| {
        b.iter(|| smith_cokernel(black_box(&q)).unwrap())
    });
}

criterion_group!(kernels, bench_cfrac, bench_definiteness, bench_smith);
criterion_main!(kernels);
