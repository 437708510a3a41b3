use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ratk::bar_oracle::hh_via_bar;
use ratk::hochschild::polynomial_base;
use ratk::kassembly::{family_hh_series, relative_k_series, verify_all};
use ratk::linalg::Matrix;
use ratk::Preset;

fn mu_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("mu_kernel");
    group.sample_size(10);
    for cutoff in [12u32, 16, 20] {
        group.bench_with_input(
            BenchmarkId::from_parameter(cutoff),
            &cutoff,
            |b, &cutoff| {
                b.iter(|| {
                    let model = Preset::Mu.descriptor().hh_model(cutoff + 1).unwrap();
                    black_box(model.kernel_dims(cutoff).unwrap())
                })
            },
        );
    }
    group.finish();
}

fn infinite_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("hh_product");
    for cutoff in [20usize, 60, 120] {
        group.bench_with_input(
            BenchmarkId::from_parameter(cutoff),
            &cutoff,
            |b, &cutoff| b.iter(|| black_box(family_hh_series(2, cutoff).unwrap())),
        );
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("bar_oracle");
    group.sample_size(10);
    for degree in [2u32, 4] {
        let alg = polynomial_base(&[("x", degree)]).unwrap();
        group.bench_with_input(BenchmarkId::new("max_degree_10", degree), &alg, |b, alg| {
            b.iter(|| black_box(hh_via_bar(alg, 10).unwrap()))
        });
    }
    group.finish();
}

fn rank(c: &mut Criterion) {
    // B on the MU model in degree 20, the largest slice of the MU kernel run.
    let model = Preset::Mu.descriptor().hh_model(21).unwrap();
    let slice = model.b_matrix(20).unwrap().matrix;
    c.bench_function("bareiss_rank_mu_deg20", |b| {
        b.iter(|| black_box(slice.rank()))
    });
    let square = Matrix::from_rows(
        (0..40)
            .map(|i| {
                (0..40)
                    .map(|j| ratk::Rational::from_integer(((i * 7 + j * 13) % 11 - 5).into()))
                    .collect()
            })
            .collect(),
    );
    c.bench_function("bareiss_rank_40x40", |b| {
        b.iter(|| black_box(square.rank()))
    });
}

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    group.sample_size(10);
    group.bench_function("relative_ku_40", |b| {
        b.iter(|| black_box(relative_k_series(&Preset::Ku.descriptor(), 40).unwrap()))
    });
    group.bench_function("verify_all_12", |b| b.iter(|| black_box(verify_all(12))));
    group.finish();
}

criterion_group!(benches, mu_kernel, infinite_product, oracle, rank, assembly);
criterion_main!(benches);
