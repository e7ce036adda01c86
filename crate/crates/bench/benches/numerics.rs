use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rotloc::characteristic::{solve_characteristic, CharInput};
use rotloc::localization::{rot_integrals, rot_radius, DEFAULT_REL_TOL};
use rotloc::logquad::bessel_i0_scaled;
use rotloc::{Branch, Convention, LabWavefunction, ModelParams, YConvention};

fn characteristic(c: &mut Criterion) {
    let input = CharInput::singular(1.0, 1e-3);
    c.bench_function("solve_characteristic", |b| {
        b.iter(|| solve_characteristic(black_box(&input)))
    });
}

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_i0_scaled");
    for u in [0.5, 15.0, 1e4] {
        g.bench_with_input(BenchmarkId::from_parameter(u), &u, |b, &u| {
            b.iter(|| bessel_i0_scaled(black_box(u)))
        });
    }
    g.finish();
}

fn rotating(c: &mut Criterion) {
    let mut g = c.benchmark_group("rot_integrals");
    for kappa in [1e1, 1e3, 1e6, 1e9] {
        g.bench_with_input(BenchmarkId::from_parameter(kappa), &kappa, |b, &k| {
            b.iter(|| rot_integrals(black_box(k), 1.0, Branch::Plus, YConvention::Decaying, DEFAULT_REL_TOL))
        });
    }
    g.finish();
    c.bench_function("rot_radius/1e4", |b| {
        b.iter(|| {
            rot_radius(
                black_box(1e4),
                1.0,
                Branch::Plus,
                YConvention::Decaying,
                DEFAULT_REL_TOL,
            )
        })
    });
}

fn dirac_residual(c: &mut Criterion) {
    let params = ModelParams::singular(1.0, 0.1, 0.01, Branch::Plus).unwrap();
    let wf = LabWavefunction::new(params, Convention::CANONICAL).unwrap();
    let pts: Vec<[f64; 4]> = (0..256)
        .map(|i| {
            let s = i as f64 / 256.0 - 0.5;
            [8.0 * s, -5.0 * s, 20.0 * s * s, 3.0 * s]
        })
        .collect();
    c.bench_function("residual_check/256", |b| b.iter(|| wf.residual_check(black_box(&pts))));
}

criterion_group!(benches, characteristic, bessel, rotating, dirac_residual);
criterion_main!(benches);
