//! Inner-loop benchmarks: structure-factor grids, autocorrelation
//! accumulation, Weyl sums and the pairing evaluation.

use aperiodica::autocorr::{autocorr_comb, pairing};
use aperiodica::diffraction::{amplitude_sum, intensity_grid};
use aperiodica::dynamics::weyl_sum;
use aperiodica::geometry::BoxRegion;
use aperiodica::testfn::TestFunction;
use aperiodica_bench::{fibonacci_comb, lattice_comb, thue_morse_comb};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn bench_amplitude_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("amplitude_sum");
    for len in [1000.0, 4000.0] {
        let comb = fibonacci_comb(len);
        group.bench_with_input(BenchmarkId::from_parameter(len), &comb, |b, comb| {
            b.iter(|| amplitude_sum(black_box(comb), [1.170820393249937, 0.0]))
        });
    }
    group.finish();
}

fn bench_intensity_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("intensity_grid");
    group.sample_size(10);
    let fib = fibonacci_comb(1600.0);
    group.bench_function("direct_fibonacci_1600", |b| {
        b.iter(|| intensity_grid(black_box(&fib), -1.0, 1.0, 1.0 / 6400.0))
    });
    let tm = thue_morse_comb(1600.0);
    group.bench_function("fft_thue_morse_1600", |b| {
        b.iter(|| intensity_grid(black_box(&tm), -1.0, 1.0, 1.0 / 6400.0))
    });
    group.finish();
}

fn bench_autocorr(c: &mut Criterion) {
    let mut group = c.benchmark_group("autocorr");
    group.sample_size(10);
    let comb = fibonacci_comb(3200.0);
    group.bench_function("fibonacci_3200_r8", |b| {
        b.iter(|| autocorr_comb(black_box(&comb), 0.0, 8.0, 0).unwrap())
    });
    group.finish();
}

fn bench_weyl_and_pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(10);
    let comb = lattice_comb(3220.0);
    let b_box = BoxRegion::line(10.0, 3210.0);
    let phi = TestFunction::tent(0.0, 0.5, 1.0);
    group.bench_function("weyl_sum_lattice_3200", |b| {
        b.iter(|| weyl_sum(black_box(&comb), &phi, [1.0, 0.0], &b_box).unwrap())
    });
    let gamma = autocorr_comb(&lattice_comb(3200.0), 0.0, 8.0, 0).unwrap();
    group.bench_function("pairing_lattice_r8", |b| {
        b.iter(|| pairing(black_box(&gamma), &phi, &phi, [1.5, 0.0]).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_amplitude_sum,
    bench_intensity_grid,
    bench_autocorr,
    bench_weyl_and_pairing
);
criterion_main!(benches);
