use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use fisherwit::operators::{quadrature_set, spin_set};
use fisherwit::states::{dephased_cat, ghz_weighted, random_separable};
use fisherwit::tensor::{hermitian_eig, HilbertStructure};
use fisherwit::witness::{constrained_qfi_max, covariance_matrix, qfi_matrix, witness_lambda_max};

// A fresh state per iteration keeps the lazily cached spectral decomposition
// out of the measurement.
fn cat_point(c: &mut Criterion) {
    let cutoff = 24;
    let set = quadrature_set(&[cutoff, cutoff]).unwrap();
    let mut group = c.benchmark_group("two_mode_cat_576");
    group.sample_size(10);

    group.bench_function("hermitian_eig", |b| {
        b.iter_batched(
            || dephased_cat(1.0, 0.3, cutoff).unwrap(),
            |rho| hermitian_eig(black_box(rho.matrix())).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("qfi_matrix", |b| {
        b.iter_batched(
            || dephased_cat(1.0, 0.3, cutoff).unwrap(),
            |rho| qfi_matrix(black_box(&rho), &set).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("covariance_matrix", |b| {
        b.iter_batched(
            || dephased_cat(1.0, 0.3, cutoff).unwrap(),
            |rho| covariance_matrix(black_box(&rho), &set).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("witness_lambda_max", |b| {
        b.iter_batched(
            || dephased_cat(1.0, 0.3, cutoff).unwrap(),
            |rho| witness_lambda_max(black_box(&rho), &set, 1e-8).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn qubit_optimization(c: &mut Criterion) {
    let set = spin_set(3).unwrap();
    let ghz = ghz_weighted(3, 0.5, 0.0).unwrap().to_density();
    c.bench_function("constrained_qfi_max/ghz3", |b| {
        b.iter(|| constrained_qfi_max(black_box(&ghz), &set, 0).unwrap())
    });

    let structure = HilbertStructure::new(vec![2, 2, 2]).unwrap();
    c.bench_function("witness_lambda_max/separable_3q", |b| {
        b.iter_batched(
            || random_separable(&structure, 10, 7).unwrap(),
            |rho| witness_lambda_max(black_box(&rho), &set, 1e-8).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, cat_point, qubit_optimization);
criterion_main!(benches);
