//! Benchmarks for the hot exact-arithmetic kernels: Schur-algebra
//! construction, image rank, the balanced-tensor reduction, and the integer
//! normal forms.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use swlab_core::duality::{epi_test, image_rank_streaming, GlGroup, PhiContext};
use swlab_core::linalg::Matrix;
use swlab_core::ring::Ring;
use swlab_core::schur::{invariant_endo_basis, SchurAlgebra};

fn bench_schur_build(c: &mut Criterion) {
    let f3 = Ring::prime_field(3).unwrap();
    c.bench_function("schur_build_f3_2_2", |b| {
        b.iter(|| SchurAlgebra::build(black_box(&f3), 2, 2).unwrap())
    });
    c.bench_function("schur_build_f3_2_3", |b| {
        b.iter(|| SchurAlgebra::build(black_box(&f3), 2, 3).unwrap())
    });
}

fn bench_image_rank(c: &mut Criterion) {
    let f3 = Ring::prime_field(3).unwrap();
    let f5 = Ring::prime_field(5).unwrap();
    c.bench_function("image_rank_f3_2_2", |b| {
        b.iter(|| image_rank_streaming(black_box(&f3), 2, 2).unwrap())
    });
    c.bench_function("image_rank_f5_3_2", |b| {
        b.iter(|| image_rank_streaming(black_box(&f5), 3, 2).unwrap())
    });
}

fn bench_epi(c: &mut Criterion) {
    let f2 = Ring::prime_field(2).unwrap();
    let group = GlGroup::enumerate(&f2, 2).unwrap();
    let schur = SchurAlgebra::build(&f2, 2, 2).unwrap();
    let ctx = PhiContext::new(group, schur).unwrap();
    c.bench_function("epi_test_f2_2_2", |b| {
        b.iter(|| epi_test(black_box(&ctx)).unwrap())
    });
}

fn bench_normal_forms(c: &mut Criterion) {
    let z = Ring::integers();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let rows: Vec<Vec<i64>> = (0..8)
        .map(|_| (0..8).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let m = Matrix::from_ints(&z, &refs);
    c.bench_function("hnf_8x8", |b| b.iter(|| black_box(&m).hnf().unwrap()));
    c.bench_function("snf_8x8", |b| b.iter(|| black_box(&m).snf(false).unwrap()));
}

fn bench_invariants(c: &mut Criterion) {
    let f2 = Ring::prime_field(2).unwrap();
    c.bench_function("invariant_basis_f2_2_3", |b| {
        b.iter(|| invariant_endo_basis(black_box(&f2), 2, 3).unwrap())
    });
}

criterion_group!(
    benches,
    bench_schur_build,
    bench_image_rank,
    bench_epi,
    bench_normal_forms,
    bench_invariants
);
criterion_main!(benches);
