//! Time-domain integration of the driven two-granule chain.
//!
//! Both granules sit between a driven wall and the shared contact. The wall
//! displacements are the real signals `Re(F_k e^{iω_D t})`. The nonlinear
//! model uses the exact contact law `k_NL [σ0 + x]_+^{3/2}` on all three
//! contacts; the linear model replaces each contact by a spring `k_L`.
//! Integration is classical fixed-step RK4 so that samples fall on a uniform
//! grid for phasor extraction.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{ensure, invalid, Error, Result};
use crate::model::{HertzContact, SystemParams};
use crate::steadystate::{steady_amplitudes, DriveSpec, SteadyAmplitudes};

/// Largest relative change of the extracted phasors allowed when the window
/// grows by one period.
pub const EXTRACTION_DRIFT_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceModel {
    Nonlinear,
    Linear,
}

/// Complex wall amplitudes and driving frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forcing {
    pub f1: Complex64,
    pub f2: Complex64,
    pub omega: f64,
}

impl Forcing {
    pub fn from_drive(d: &DriveSpec) -> Self {
        let (f1, f2) = d.forces();
        Forcing {
            f1,
            f2,
            omega: d.omega,
        }
    }

    /// Undriven system (both walls at rest).
    pub fn none() -> Self {
        Forcing {
            f1: Complex64::new(0.0, 0.0),
            f2: Complex64::new(0.0, 0.0),
            omega: 1.0,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Forcing {
            f1: self.f1 * factor,
            f2: self.f2 * factor,
            ..self
        }
    }

    /// Wall displacements at time `t`.
    pub fn walls(&self, t: f64) -> (f64, f64) {
        let (s, c) = (self.omega * t).sin_cos();
        (
            self.f1.re * c - self.f1.im * s,
            self.f2.re * c - self.f2.im * s,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub model: ForceModel,
    pub dt: f64,
    pub t_end: f64,
    /// `(u1, v1, u2, v2)` at `t = 0`.
    pub initial: [f64; 4],
}

impl IntegratorConfig {
    /// Zero initial conditions and the default step for `omega`.
    pub fn new(model: ForceModel, omega: f64, t_end: f64) -> Self {
        IntegratorConfig {
            model,
            dt: default_step(omega),
            t_end,
            initial: [0.0; 4],
        }
    }

    pub fn validate(&self, p: &SystemParams) -> Result<()> {
        ensure(self.dt.is_finite() && self.dt > 0.0, || {
            format!("time step dt must be > 0, got {}", self.dt)
        })?;
        ensure(self.t_end.is_finite() && self.t_end >= self.dt, || {
            format!("horizon t_end must be >= dt, got {}", self.t_end)
        })?;
        ensure(self.initial.iter().all(|x| x.is_finite()), || {
            "initial conditions must be finite".to_string()
        })?;
        if self.model == ForceModel::Nonlinear && p.contact.is_none() {
            return Err(invalid(
                "nonlinear model needs k_NL and sigma0 in the system parameters",
            ));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        // The small slack keeps e.g. 6000/0.005 from rounding down.
        (self.t_end / self.dt * (1.0 + 1e-12)).floor() as usize + 1
    }
}

/// `min(0.005, T_D/200)` with `T_D = 2π/ω_D`.
pub fn default_step(omega: f64) -> f64 {
    (TAU / omega / 200.0).min(0.005)
}

/// Time after which the free response has decayed below 1e-3 of its initial
/// envelope, `(2m/η)·ln(10³)`. Infinite for an undamped system.
pub fn transient_cut(p: &SystemParams) -> f64 {
    2.0 * p.mass / p.damping * 1e3f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub u1: f64,
    pub v1: f64,
    pub u2: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub dt: f64,
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }
}

/// `k_NL · max(x + σ0, 0)^{3/2}`.
pub fn hertz_force(x: f64, sigma0: f64, k_nl: f64) -> f64 {
    let overlap = (x + sigma0).max(0.0);
    k_nl * overlap * overlap.sqrt()
}

/// Elastic energy stored in one contact, `(2/5)·k_NL·max(x + σ0, 0)^{5/2}`.
pub fn hertz_potential(x: f64, sigma0: f64, k_nl: f64) -> f64 {
    let overlap = (x + sigma0).max(0.0);
    0.4 * k_nl * overlap * overlap * overlap.sqrt()
}

#[derive(Clone, Copy)]
enum Law {
    Linear { k: f64 },
    Hertz(HertzContact),
}

impl Law {
    fn for_model(p: &SystemParams, model: ForceModel) -> Law {
        match (model, p.contact) {
            (ForceModel::Nonlinear, Some(c)) => Law::Hertz(c),
            _ => Law::Linear { k: p.k_linear },
        }
    }

    /// Contact force for a compression increment `x` beyond the static overlap.
    /// The linear law drops the static preload, which cancels in every equation.
    #[inline]
    fn force(self, x: f64) -> f64 {
        match self {
            Law::Linear { k } => k * x,
            Law::Hertz(c) => hertz_force(x, c.sigma0, c.k_nl),
        }
    }

    fn energy(self, x: f64) -> f64 {
        match self {
            Law::Linear { k } => 0.5 * k * x * x,
            Law::Hertz(c) => hertz_potential(x, c.sigma0, c.k_nl),
        }
    }
}

struct Rhs {
    law: Law,
    mass: f64,
    damping: f64,
    forcing: Forcing,
}

impl Rhs {
    #[inline]
    fn eval(&self, t: f64, y: &[f64; 4]) -> [f64; 4] {
        let [u1, v1, u2, v2] = *y;
        let (w1, w2) = self.forcing.walls(t);
        let left = self.law.force(w1 - u1);
        let middle = self.law.force(u1 - u2);
        let right = self.law.force(u2 - w2);
        [
            v1,
            (left - middle - self.damping * v1) / self.mass,
            v2,
            (middle - right - self.damping * v2) / self.mass,
        ]
    }
}

fn rk4_step(rhs: &Rhs, t: f64, y: &[f64; 4], h: f64) -> [f64; 4] {
    let axpy = |a: &[f64; 4], s: f64, b: &[f64; 4]| -> [f64; 4] {
        [
            a[0] + s * b[0],
            a[1] + s * b[1],
            a[2] + s * b[2],
            a[3] + s * b[3],
        ]
    };
    let k1 = rhs.eval(t, y);
    let k2 = rhs.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs.eval(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

pub fn integrate(p: &SystemParams, d: &DriveSpec, cfg: &IntegratorConfig) -> Result<TimeSeries> {
    d.validate()?;
    integrate_forcing(p, &Forcing::from_drive(d), cfg)
}

/// Integrates from `t = 0` to `floor(t_end/dt)·dt` and returns every step.
pub fn integrate_forcing(
    p: &SystemParams,
    forcing: &Forcing,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    p.validate()?;
    cfg.validate(p)?;
    ensure(
        forcing.omega.is_finite() && forcing.f1.is_finite() && forcing.f2.is_finite(),
        || "forcing must be finite".to_string(),
    )?;
    let rhs = Rhs {
        law: Law::for_model(p, cfg.model),
        mass: p.mass,
        damping: p.damping,
        forcing: *forcing,
    };
    let n = cfg.sample_count();
    let mut samples = Vec::with_capacity(n);
    let mut y = cfg.initial;
    let to_sample = |t: f64, y: &[f64; 4]| Sample {
        t,
        u1: y[0],
        v1: y[1],
        u2: y[2],
        v2: y[3],
    };
    samples.push(to_sample(0.0, &y));
    for i in 1..n {
        let t0 = (i - 1) as f64 * cfg.dt;
        y = rk4_step(&rhs, t0, &y, cfg.dt);
        let t = i as f64 * cfg.dt;
        if !y.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        samples.push(to_sample(t, &y));
    }
    Ok(TimeSeries {
        dt: cfg.dt,
        samples,
    })
}

/// Kinetic plus elastic energy of the three contacts at one sample. For the
/// nonlinear model this includes the static preload energy.
pub fn mechanical_energy(
    p: &SystemParams,
    model: ForceModel,
    forcing: &Forcing,
    s: &Sample,
) -> f64 {
    let law = Law::for_model(p, model);
    let (w1, w2) = forcing.walls(s.t);
    0.5 * p.mass * (s.v1 * s.v1 + s.v2 * s.v2)
        + law.energy(w1 - s.u1)
        + law.energy(s.u1 - s.u2)
        + law.energy(s.u2 - w2)
}

/// Least-squares fit of `a·cos ωt + b·sin ωt + c` over samples with `t >= t0`.
/// Returns the phasors `A_k = a − i·b`, so that `u_k ≈ Re(A_k e^{iωt}) + c_k`.
fn fit_phasors(samples: &[Sample], omega: f64) -> Result<(Complex64, Complex64)> {
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs1 = Vector3::<f64>::zeros();
    let mut rhs2 = Vector3::<f64>::zeros();
    for s in samples {
        let (sn, cs) = (omega * s.t).sin_cos();
        let basis = Vector3::new(cs, sn, 1.0);
        normal += basis * basis.transpose();
        rhs1 += basis * s.u1;
        rhs2 += basis * s.u2;
    }
    let lu = normal.lu();
    let (x1, x2) = lu
        .solve(&rhs1)
        .zip(lu.solve(&rhs2))
        .ok_or_else(|| invalid("extraction window too short to resolve the driving tone"))?;
    Ok((Complex64::new(x1[0], -x1[1]), Complex64::new(x2[0], -x2[1])))
}

/// Samples covering the final `periods` driving periods.
fn tail_window(ts: &TimeSeries, omega: f64, periods: usize) -> Result<&[Sample]> {
    let last = ts
        .samples
        .last()
        .ok_or_else(|| invalid("empty time series"))?;
    let span = periods as f64 * TAU / omega;
    ensure(ts.duration() >= span, || {
        format!(
            "time series spans {:.6} but {periods} periods need {span:.6}",
            ts.duration()
        )
    })?;
    let start_t = last.t - span - 1e-9 * ts.dt;
    let start = ts.samples.partition_point(|s| s.t < start_t);
    Ok(&ts.samples[start..])
}

/// Steady phasors at `omega` from the last `n_cycles` periods of a series.
///
/// The fit is repeated over `n_cycles + 1` periods; if the phasors move by
/// more than [`EXTRACTION_DRIFT_LIMIT`] relative to the larger amplitude the
/// series has not settled and `NotConverged` is returned.
pub fn extract_steady(ts: &TimeSeries, omega: f64, n_cycles: usize) -> Result<SteadyAmplitudes> {
    ensure(n_cycles >= 5, || {
        format!("extraction needs at least 5 cycles, got {n_cycles}")
    })?;
    ensure(omega.is_finite() && omega > 0.0, || {
        format!("driving frequency omega_d must be > 0, got {omega}")
    })?;
    let (a1, a2) = fit_phasors(tail_window(ts, omega, n_cycles)?, omega)?;
    let (b1, b2) = fit_phasors(tail_window(ts, omega, n_cycles + 1)?, omega)?;
    let scale = a1.norm().max(a2.norm());
    let drift = if scale > 0.0 {
        (a1 - b1).norm().max((a2 - b2).norm()) / scale
    } else {
        0.0
    };
    if drift.is_nan() || drift > EXTRACTION_DRIFT_LIMIT {
        return Err(Error::NotConverged {
            drift,
            limit: EXTRACTION_DRIFT_LIMIT,
        });
    }
    Ok(SteadyAmplitudes { a1, a2 })
}

/// Largest phasor deviation relative to the larger reference amplitude.
pub fn relative_error(got: &SteadyAmplitudes, reference: &SteadyAmplitudes) -> f64 {
    let scale = reference.a1.norm().max(reference.a2.norm());
    (got.a1 - reference.a1)
        .norm()
        .max((got.a2 - reference.a2).norm())
        / scale
}

/// Frequency-domain amplitudes next to their time-domain reproductions.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub analytic: SteadyAmplitudes,
    pub linear: SteadyAmplitudes,
    pub linear_error: f64,
    pub nonlinear: Option<SteadyAmplitudes>,
    pub nonlinear_error: Option<f64>,
    /// Peak relative contact displacement of the nonlinear run over `σ0`.
    pub amplitude_ratio: Option<f64>,
}

/// Runs the linear (and, when contact data is present, the nonlinear) model
/// from rest for `t_end` and compares the extracted phasors with the analytic
/// steady state.
pub fn oracle_report(
    p: &SystemParams,
    d: &DriveSpec,
    t_end: f64,
    n_cycles: usize,
) -> Result<OracleReport> {
    let analytic = steady_amplitudes(p, d)?;
    let run = |model| -> Result<(SteadyAmplitudes, TimeSeries)> {
        let ts = integrate(p, d, &IntegratorConfig::new(model, d.omega, t_end))?;
        Ok((extract_steady(&ts, d.omega, n_cycles)?, ts))
    };
    let (linear, _) = run(ForceModel::Linear)?;
    let (nonlinear, amplitude_ratio) = match p.contact {
        Some(c) => {
            let (amps, ts) = run(ForceModel::Nonlinear)?;
            let forcing = Forcing::from_drive(d);
            let peak = ts
                .samples
                .iter()
                .map(|s| {
                    let (w1, w2) = forcing.walls(s.t);
                    (w1 - s.u1)
                        .abs()
                        .max((s.u1 - s.u2).abs())
                        .max((s.u2 - w2).abs())
                })
                .fold(0.0, f64::max);
            (Some(amps), Some(peak / c.sigma0))
        }
        None => (None, None),
    };
    Ok(OracleReport {
        linear_error: relative_error(&linear, &analytic),
        nonlinear_error: nonlinear.as_ref().map(|n| relative_error(n, &analytic)),
        analytic,
        linear,
        nonlinear,
        amplitude_ratio,
    })
}
