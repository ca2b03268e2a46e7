use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use discforge::boundary_pl::{make_sawtooth, pl_fourier};
use discforge::constructor::construct;
use discforge::nd_verifier::verify_pl;
use discforge::{Complex64, SawtoothParams, TrigSeries};

fn fourier(c: &mut Criterion) {
    let saw = make_sawtooth(SawtoothParams::new(0.1, 64).unwrap());
    c.bench_function("pl_fourier sawtooth R=64 K=4096", |b| {
        b.iter(|| pl_fourier(black_box(&saw), 4096))
    });
}

fn verifier(c: &mut Criterion) {
    let saw = make_sawtooth(SawtoothParams::new(0.1, 256).unwrap());
    c.bench_function("verify_pl sawtooth R=256 n=10", |b| b.iter(|| verify_pl(black_box(&saw), 10).unwrap()));
}

fn constructor(c: &mut Criterion) {
    let f = TrigSeries::monomial(1, Complex64::new(1.0, 0.0));
    let mut group = c.benchmark_group("construct");
    group.sample_size(10);
    group.bench_function("z eps=0.1 n=5", |b| b.iter(|| construct(black_box(&f), 0.1, 5).unwrap()));
    group.finish();
}

criterion_group!(benches, fourier, verifier, constructor);
criterion_main!(benches);
