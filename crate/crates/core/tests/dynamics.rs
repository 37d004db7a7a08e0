use std::f64::consts::{PI, SQRT_2};

use elasticbit::{
    extract_steady, integrate, integrate_forcing, mechanical_energy, oracle_report, relative_error,
    steady_amplitudes, DriveSpec, ForceModel, Forcing, IntegratorConfig, Sample, SystemParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mid_band_drive() -> DriveSpec {
    DriveSpec::new(0.5, PI, SQRT_2).unwrap()
}

#[test]
fn linear_run_matches_analytic_amplitudes() {
    let p = SystemParams::default();
    let d = mid_band_drive();
    let cfg = IntegratorConfig {
        model: ForceModel::Linear,
        dt: 0.005,
        t_end: 6000.0,
        initial: [0.0; 4],
    };
    let ts = integrate(&p, &d, &cfg).unwrap();
    let got = extract_steady(&ts, d.omega, 10).unwrap();
    let err = relative_error(&got, &steady_amplitudes(&p, &d).unwrap());
    assert!(err < 5e-3, "relative error {err}");
}

#[test]
fn stiff_precompression_reproduces_linear_response() {
    let p = SystemParams::default().with_precompression(1e4).unwrap();
    let report = oracle_report(&p, &mid_band_drive(), 6000.0, 10).unwrap();
    assert!(report.linear_error < 5e-3);
    assert!(report.amplitude_ratio.unwrap() < 1e-3);
    let err = report.nonlinear_error.unwrap();
    assert!(err < 1e-2, "nonlinear relative error {err}");
}

/// Energy above the static equilibrium. The preload terms cancel between the
/// three contacts, so this is a positive definite measure of the motion.
fn excess_energy(p: &SystemParams, s: &Sample) -> f64 {
    let rest = Sample {
        t: s.t,
        u1: 0.0,
        v1: 0.0,
        u2: 0.0,
        v2: 0.0,
    };
    mechanical_energy(p, ForceModel::Nonlinear, &Forcing::none(), s)
        - mechanical_energy(p, ForceModel::Nonlinear, &Forcing::none(), &rest)
}

#[test]
fn undriven_undamped_energy_is_conserved() {
    let p = SystemParams::new(1.0, 1.0, 0.0)
        .unwrap()
        .with_precompression(1.0)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let initial = [(); 4].map(|_| rng.gen_range(-0.02..0.02));
    let cfg = IntegratorConfig {
        model: ForceModel::Nonlinear,
        dt: 0.005,
        t_end: 500.0,
        initial,
    };
    let ts = integrate_forcing(&p, &Forcing::none().scaled(0.0), &cfg).unwrap();
    assert_eq!(ts.len(), 100_001);
    let e0 = excess_energy(&p, &ts.samples[0]);
    let worst = ts
        .samples
        .iter()
        .map(|s| (excess_energy(&p, s) - e0).abs() / e0)
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "relative energy drift {worst}");
}

#[test]
fn halving_the_step_gives_fourth_order_gain() {
    let p = SystemParams::default();
    let d = mid_band_drive();
    let exact = steady_amplitudes(&p, &d).unwrap();
    let w = d.omega;
    let initial = [exact.a1.re, -w * exact.a1.im, exact.a2.re, -w * exact.a2.im];
    let errors: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&dt| {
            let cfg = IntegratorConfig {
                model: ForceModel::Linear,
                dt,
                t_end: 200.0,
                initial,
            };
            let ts = integrate(&p, &d, &cfg).unwrap();
            relative_error(&extract_steady(&ts, w, 10).unwrap(), &exact)
        })
        .collect();
    for pair in errors.windows(2) {
        assert!(
            pair[1] < 1e-10 || pair[0] / pair[1] >= 8.0,
            "errors {errors:?}"
        );
    }
}

fn mirrored(f: &Forcing) -> Forcing {
    Forcing {
        f1: -f.f2,
        f2: -f.f1,
        omega: f.omega,
    }
}

#[test]
fn mirror_symmetry_of_trajectories() {
    let d = DriveSpec::new(0.3, 0.7, 1.25).unwrap();
    let forcing = Forcing::from_drive(&d).scaled(0.05);
    let initial = [0.01, -0.02, 0.005, 0.03];
    let mirror_initial = [-initial[2], -initial[3], -initial[0], -initial[1]];
    let linear = SystemParams::default();
    let nonlinear = linear.with_precompression(0.5).unwrap();
    for (p, model) in [
        (linear, ForceModel::Linear),
        (nonlinear, ForceModel::Nonlinear),
    ] {
        let cfg = IntegratorConfig {
            model,
            dt: 0.01,
            t_end: 100.0,
            initial,
        };
        let a = integrate_forcing(&p, &forcing, &cfg).unwrap();
        let b = integrate_forcing(
            &p,
            &mirrored(&forcing),
            &IntegratorConfig {
                initial: mirror_initial,
                ..cfg
            },
        )
        .unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.u1 + y.u2).abs() < 1e-12);
            assert!((x.u2 + y.u1).abs() < 1e-12);
            assert!((x.v1 + y.v2).abs() < 1e-12);
            assert!((x.v2 + y.v1).abs() < 1e-12);
        }
    }
}

#[test]
fn real_signal_matches_phasor_of_linear_steady_state() {
    let p = SystemParams::default();
    let d = DriveSpec::new(0.8, -1.1, 1.6).unwrap();
    let exact = steady_amplitudes(&p, &d).unwrap();
    let w = d.omega;
    let cfg = IntegratorConfig {
        model: ForceModel::Linear,
        dt: 0.002,
        t_end: 50.0,
        initial: [exact.a1.re, -w * exact.a1.im, exact.a2.re, -w * exact.a2.im],
    };
    let ts = integrate(&p, &d, &cfg).unwrap();
    let scale = exact.a1.norm().max(exact.a2.norm());
    for s in ts.samples.iter().step_by(97) {
        let e = elasticbit::Complex64::from_polar(1.0, w * s.t);
        assert!((s.u1 - (exact.a1 * e).re).abs() < 1e-8 * scale);
        assert!((s.u2 - (exact.a2 * e).re).abs() < 1e-8 * scale);
    }
}
