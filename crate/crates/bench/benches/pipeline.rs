use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use taf15::forms::{group_cohomology, Action};
use taf15::hilbert::verify_intersections;
use taf15::hyperbolic::verify_geodesic_claims;
use taf15::specseq::{run, verify_e2, PlainModel, Window};

fn spectral(c: &mut Criterion) {
    let model = PlainModel::connective();
    let small = Window::new(-8, 24, 16).unwrap();
    c.bench_function("ss run -8:24 cap 16", |b| b.iter(|| run(&model, black_box(small)).unwrap()));

    let mut slow = c.benchmark_group("slow");
    slow.sample_size(10);
    let full = Window::new(-16, 64, 40).unwrap();
    slow.bench_function("ss run -16:64 cap 40", |b| b.iter(|| run(&model, black_box(full)).unwrap()));
    slow.bench_function("E2 cross-check -16:64", |b| b.iter(|| verify_e2(black_box(full))));
    slow.finish();
}

fn exact(c: &mut Criterion) {
    c.bench_function("H^s(C2; R_t) slice", |b| {
        b.iter(|| {
            for t in -12..=12 {
                for s in 0..4 {
                    black_box(group_cohomology(Action::Deck, s, t).unwrap());
                }
            }
        })
    });
    c.bench_function("CM intersections", |b| b.iter(verify_intersections));
    c.bench_function("geodesic claims 30 digits", |b| b.iter(|| verify_geodesic_claims(black_box(30)).unwrap()));
}

criterion_group!(benches, spectral, exact);
criterion_main!(benches);
