use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qset_core::corpus::{latin3_family, pauli_basis, qls4_family};
use qset_core::tensor::{random_hermitian, random_matrix};
use qset_core::{
    decompose, family_to_qfun, herm_eig, kron, matrix_algebra, ueb_to_bijection, verify_qbij,
    wedderburn, Tolerance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_kron(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_matrix(&mut rng, 16, 16);
    let b = random_matrix(&mut rng, 16, 16);
    c.bench_function("kron 16x16 (x) 16x16", |bench| {
        bench.iter(|| kron(std::hint::black_box(&a), std::hint::black_box(&b)))
    });
}

fn bench_herm_eig(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h32 = random_hermitian(&mut rng, 32);
    c.bench_function("herm_eig 32x32", |bench| {
        bench.iter_batched(
            || h32.clone(),
            |h| herm_eig(&h, &tol).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_verify_qbij(c: &mut Criterion) {
    let tol = Tolerance::default();
    let qls = family_to_qfun(&qls4_family(), &tol).unwrap();
    c.bench_function("verify_qbij qls4", |bench| {
        bench.iter(|| verify_qbij(std::hint::black_box(&qls), &tol).unwrap())
    });
}

fn bench_decompose(c: &mut Criterion) {
    let tol = Tolerance::default();
    let latin = family_to_qfun(&latin3_family(), &tol).unwrap();
    c.bench_function("decompose latin3", |bench| {
        bench.iter(|| decompose(std::hint::black_box(&latin), 7, &tol).unwrap())
    });
}

fn bench_wedderburn(c: &mut Criterion) {
    let tol = Tolerance::default();
    let algebra = matrix_algebra(3).unwrap();
    c.bench_function("wedderburn Mat3", |bench| {
        bench.iter(|| wedderburn(std::hint::black_box(&algebra), 0, &tol).unwrap())
    });
}

fn bench_ueb(c: &mut Criterion) {
    let tol = Tolerance::default();
    let basis = pauli_basis();
    c.bench_function("ueb_to_bijection pauli", |bench| {
        bench.iter(|| ueb_to_bijection(std::hint::black_box(&basis), &tol).unwrap())
    });
}

criterion_group!(
    benches,
    bench_kron,
    bench_herm_eig,
    bench_verify_qbij,
    bench_decompose,
    bench_wedderburn,
    bench_ueb
);
criterion_main!(benches);
