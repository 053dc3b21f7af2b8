use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cocal_core::g2::{hodge_dual_pattern, hodge_star, induced_bilinear, standard_three_form, standard_volume, Kind, StandardFormSpec};
use cocal_core::random::{invertible, random_form, rng};
use cocal_core::Variance;

fn exterior(c: &mut Criterion) {
    let mut r = rng(3);
    let a = random_form(&mut r, 7, 3, Variance::Form, 0.5);
    let b = random_form(&mut r, 7, 4, Variance::Form, 0.5);
    let f = invertible(&mut r, 7, 3);
    let psi = hodge_dual_pattern(1);
    let mut g = c.benchmark_group("exterior");
    g.bench_function("wedge_3_4", |bch| bch.iter(|| black_box(&a).wedge(black_box(&b))));
    g.bench_function("pushforward_4form", |bch| bch.iter(|| black_box(&psi).pushforward(black_box(&f))));
    g.bench_function("derivation_action_4form", |bch| {
        let m = invertible(&mut rng(4), 7, 2);
        bch.iter(|| cocal_core::Multivector::derivation_action(black_box(&m), black_box(&psi)))
    });
    g.finish();
}

fn metric(c: &mut Criterion) {
    let phi = standard_three_form(StandardFormSpec::of(Kind::G2Star));
    let vol = standard_volume();
    let gram = induced_bilinear(&phi, &vol).unwrap();
    let mut g = c.benchmark_group("metric");
    g.bench_function("induced_bilinear", |b| b.iter(|| induced_bilinear(black_box(&phi), &vol).unwrap()));
    g.bench_function("hodge_star_3form", |b| b.iter(|| hodge_star(black_box(&phi), &gram, &vol).unwrap()));
    g.finish();
}

criterion_group!(benches, exterior, metric);
criterion_main!(benches);
