use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slo_core::localring::{make_ring, Characteristic};
use slo_core::matgroup::{decompose_sl2, decompose_sln, RMatrix};

fn decompose(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let zp = make_ring(Characteristic::Zero, 2, 64).unwrap();
    let fpt = make_ring(Characteristic::Positive, 3, 32).unwrap();

    let sl2: Vec<_> = (0..64).map(|_| RMatrix::random_sl(&zp, 2, &mut rng)).collect();
    c.bench_function("decompose_sl2 Z/2^64", |b| {
        b.iter(|| sl2.iter().map(|m| decompose_sl2(black_box(m)).unwrap().len()).sum::<usize>())
    });

    let sl2t: Vec<_> = (0..64).map(|_| RMatrix::random_sl(&fpt, 2, &mut rng)).collect();
    c.bench_function("decompose_sl2 F_3[t]/t^32", |b| {
        b.iter(|| sl2t.iter().map(|m| decompose_sl2(black_box(m)).unwrap().len()).sum::<usize>())
    });

    let sl4: Vec<_> = (0..16).map(|_| RMatrix::random_sl(&zp, 4, &mut rng)).collect();
    c.bench_function("decompose_sln n=4 Z/2^64", |b| {
        b.iter(|| sl4.iter().map(|m| decompose_sln(black_box(m)).unwrap().len()).sum::<usize>())
    });
}

criterion_group!(benches, decompose);
criterion_main!(benches);
