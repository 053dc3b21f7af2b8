use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cocal_core::certificate::build_certificate;
use cocal_core::corpus::nilpotent_jordan;
use cocal_core::g2::Kind;
use cocal_core::oracle::oracle_decide;
use cocal_core::random::{random_model_matrix, rng};
use cocal_core::report::{decide_matrix, Tolerances};
use cocal_core::{FieldMode, Matrix, Scalar};

fn split_diag() -> Matrix {
    Matrix::diagonal(&[2, 2, 2, 2, -2, -2].map(Scalar::from_i64))
}

fn decisions(c: &mut Criterion) {
    let nil = nilpotent_jordan(&[3, 2, 1]);
    let mut r = rng(1);
    let (_, conj) = random_model_matrix(&mut r);
    let mut g = c.benchmark_group("decide");
    g.bench_function("nilpotent_321", |b| {
        b.iter(|| decide_matrix(black_box(&nil), FieldMode::Rational, Tolerances::default(), String::new()).unwrap())
    });
    g.bench_function("random_conjugate", |b| {
        b.iter(|| decide_matrix(black_box(&conj), FieldMode::GaussianRational, Tolerances::default(), String::new()).unwrap())
    });
    g.bench_function("oracle_nilpotent_321", |b| b.iter(|| oracle_decide(black_box(&nil))));
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let mut g = c.benchmark_group("certificate");
    let j6 = nilpotent_jordan(&[6]);
    let split = split_diag();
    g.bench_function("g2_nilpotent_6", |b| b.iter(|| build_certificate(black_box(&j6), Kind::G2, FieldMode::Rational).unwrap()));
    g.bench_function("g2star_length2", |b| {
        b.iter(|| build_certificate(black_box(&split), Kind::G2Star, FieldMode::Rational).unwrap())
    });
    g.finish();
}

criterion_group!(benches, decisions, certificates);
criterion_main!(benches);
