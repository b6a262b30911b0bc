use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::hint::black_box;

use conelab::eigencheck::{radial_residual, RadialGrid};
use conelab::lemmas::{lemma3_sweep, step1_asymmetric_exclusion, Regime};
use conelab::solver::{family_distance, jacobian, DEFAULT_FD_STEP};
use conelab::sphtrig::{angles_from_sides, side_from_sas};
use conelab::{cone_angles, gauss_newton, rigidity_scan, GluedFootballParams, GnOptions, RigidityOptions};
use conelab_bench::{family_point, perturbed};
use criterion::{criterion_group, criterion_main, Criterion};

fn trig(c: &mut Criterion) {
    c.bench_function("side_from_sas", |b| {
        b.iter(|| side_from_sas(black_box(1.1), black_box(0.7), black_box(2.0)))
    });
    c.bench_function("angles_from_sides", |b| {
        b.iter(|| angles_from_sides(black_box(1.1), black_box(0.7), black_box(1.5)))
    });
}

fn constraints(c: &mut Criterion) {
    let (m, spec) = family_point(1.0, 2.0, 1.2);
    c.bench_function("cone_angles", |b| b.iter(|| cone_angles(black_box(&m))));
    c.bench_function("jacobian", |b| {
        b.iter(|| jacobian(black_box(&m), &spec, DEFAULT_FD_STEP))
    });
    c.bench_function("family_distance", |b| {
        b.iter(|| family_distance(black_box(&m), &spec))
    });
}

fn solver(c: &mut Criterion) {
    let (m, spec) = family_point(FRAC_PI_2, FRAC_PI_2, FRAC_PI_3);
    let start = perturbed(&m, 0.03);
    let opts = GnOptions::default();
    c.bench_function("gauss_newton", |b| {
        b.iter(|| gauss_newton(black_box(&start), &spec, &opts))
    });
    let params = GluedFootballParams::new(spec, FRAC_PI_3).unwrap();
    let scan = RigidityOptions {
        samples: 32,
        ..RigidityOptions::default()
    };
    let mut group = c.benchmark_group("rigidity");
    group.sample_size(10);
    group.bench_function("scan_32", |b| b.iter(|| rigidity_scan(black_box(&params), &scan)));
    group.finish();
}

fn suites(c: &mut Criterion) {
    c.bench_function("lemma3_sweep_400", |b| {
        b.iter(|| lemma3_sweep(black_box(FRAC_PI_3), FRAC_PI_2, 400))
    });
    let grid = Regime::Below.ell_grid(40);
    c.bench_function("step1_sweep_40", |b| {
        b.iter(|| step1_asymmetric_exclusion(1.0, 2.0, black_box(0.05), &grid, Regime::Below))
    });
    let g = RadialGrid::new(1001, 0.1).unwrap();
    c.bench_function("radial_residual_1001", |b| b.iter(|| radial_residual(black_box(&g))));
}

criterion_group!(benches, trig, constraints, solver, suites);
criterion_main!(benches);
