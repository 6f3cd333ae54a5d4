use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slo_core::congruence::{abelianization, special_linear_group, DEFAULT_ELEMENT_CAP};

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("sl2_closure");
    group.sample_size(10);
    for (p, m) in [(3u32, 2u32), (5, 2), (2, 6)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{p}^{m}")), &(p, m), |b, &(p, m)| {
            b.iter(|| special_linear_group(2, black_box(p), black_box(m), DEFAULT_ELEMENT_CAP).unwrap())
        });
    }
    group.finish();
}

fn abelianize(c: &mut Criterion) {
    let mut group = c.benchmark_group("abelianization");
    group.sample_size(10);
    for (n, p, m) in [(2usize, 3u32, 2u32), (2, 2, 6), (3, 3, 1)] {
        let g = special_linear_group(n, p, m, DEFAULT_ELEMENT_CAP).unwrap();
        group.bench_function(format!("SL{n}(Z/{p}^{m})"), |b| {
            b.iter(|| abelianization(black_box(&g), DEFAULT_ELEMENT_CAP).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closure, abelianize);
criterion_main!(benches);
