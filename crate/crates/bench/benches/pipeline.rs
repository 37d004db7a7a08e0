use std::f64::consts::{PI, SQRT_2};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use elasticbit::angle::linspace;
use elasticbit::{
    berry_phase_loop, berry_sweep, drive_to_bloch, integrate, DriveSpec, ForceModel,
    IntegratorConfig, LoopSpec, SystemParams,
};

fn steady_state(c: &mut Criterion) {
    let p = SystemParams::default();
    let d = DriveSpec::new(0.5, 0.3, SQRT_2).unwrap();
    c.bench_function("drive_to_bloch", |b| {
        b.iter(|| drive_to_bloch(black_box(&p), black_box(&d)))
    });
}

fn berry_loops(c: &mut Criterion) {
    let p = SystemParams::default();
    let mut group = c.benchmark_group("berry_phase_loop");
    for steps in [256usize, 4096] {
        let spec = LoopSpec::new(0.5, SQRT_2, steps).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(steps), &spec, |b, s| {
            b.iter(|| berry_phase_loop(&p, s))
        });
    }
    group.finish();

    let omegas = linspace(1.05, 1.7, 8);
    let ratios = linspace(0.0, 1.0, 101);
    c.bench_function("berry_sweep_8x101", |b| {
        b.iter(|| berry_sweep(&p, &omegas, &ratios, 256))
    });
}

fn time_domain(c: &mut Criterion) {
    let d = DriveSpec::new(0.5, PI, SQRT_2).unwrap();
    let linear = SystemParams::default();
    let nonlinear = linear.with_precompression(1e4).unwrap();
    let mut group = c.benchmark_group("integrate_100_periods");
    group.sample_size(20);
    for (name, p, model) in [
        ("linear", linear, ForceModel::Linear),
        ("nonlinear", nonlinear, ForceModel::Nonlinear),
    ] {
        let cfg = IntegratorConfig::new(model, d.omega, 100.0 * 2.0 * PI / d.omega);
        group.bench_function(name, |b| b.iter(|| integrate(&p, &d, &cfg)));
    }
    group.finish();
}

criterion_group!(benches, steady_state, berry_loops, time_domain);
criterion_main!(benches);
