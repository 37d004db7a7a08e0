//! Berry phase of the elastic bit over closed loops in driver space.
//!
//! A loop holds the mixing ratio ℰ and the frequency ω_D fixed and sweeps the
//! phase offset δ over one full turn. The discrete phase is the Wilson-loop
//! form `γ = −Σ arg⟨ψ_j|ψ_{j+1}⟩` over the closed cycle, which is gauge
//! invariant and converges to `i∮⟨ψ|dψ⟩ = −½·Δφ·(1 − cos θ)`. Reported
//! phases are principal values in (−π, π].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::angle::wrap;
use crate::error::{ensure, invalid, Error, Result};
use crate::model::{eigenfrequencies, EigenPair, SystemParams};
use crate::steadystate::{
    bloch_angles, modal_coefficients, steady_amplitudes, BlochAngles, DriveSpec, ModalState,
};

pub const MIN_LOOP_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSpec {
    pub ratio: f64,
    pub omega: f64,
    pub steps: usize,
}

impl LoopSpec {
    pub fn new(ratio: f64, omega: f64, steps: usize) -> Result<Self> {
        let l = LoopSpec {
            ratio,
            omega,
            steps,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.steps >= MIN_LOOP_STEPS, || {
            format!(
                "loop needs at least {MIN_LOOP_STEPS} steps, got {}",
                self.steps
            )
        })?;
        DriveSpec::new(self.ratio, 0.0, self.omega).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryLoopResult {
    pub gamma_discrete: f64,
    pub gamma_analytic: f64,
    /// Polar angle of the loop (constant along it).
    pub theta: f64,
    /// Net number of turns of the azimuth around the loop.
    pub winding: i32,
    pub steps: usize,
}

/// `⟨a|b⟩ = α_a*·α_b + β_a*·β_b`.
///
/// The displacement-basis overlap `A1*·A1' + A2*·A2'` of the same two
/// normalized states is identical since the basis change is unitary.
pub fn berry_connection(a: &ModalState, b: &ModalState) -> Complex64 {
    a.alpha.conj() * b.alpha + a.beta.conj() * b.beta
}

/// N phase offsets uniformly covering (−π, π]; the loop closes back onto the first.
pub fn loop_phase_samples(steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|j| {
            if j + 1 == steps {
                PI
            } else {
                -PI + TAU * (j + 1) as f64 / steps as f64
            }
        })
        .collect()
}

pub fn loop_states(p: &SystemParams, spec: &LoopSpec) -> Result<Vec<ModalState>> {
    spec.validate()?;
    loop_phase_samples(spec.steps)
        .into_iter()
        .map(|delta| {
            let d = DriveSpec {
                ratio: spec.ratio,
                phase: delta,
                omega: spec.omega,
            };
            modal_coefficients(&steady_amplitudes(p, &d)?)
        })
        .collect()
}

/// `wrap(−Σ_j arg⟨ψ_j|ψ_{j+1 mod N}⟩)`.
pub fn wilson_loop_phase(states: &[ModalState]) -> f64 {
    let n = states.len();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = (0..n)
        .map(|j| berry_connection(&states[j], &states[(j + 1) % n]).arg())
        .sum();
    wrap(-total)
}

/// Net azimuthal turns around the closed cycle of angles.
fn azimuth_winding(angles: &[BlochAngles]) -> i32 {
    let n = angles.len();
    let turns: f64 = (0..n)
        .map(|j| wrap(angles[(j + 1) % n].phi - angles[j].phi))
        .sum::<f64>()
        / TAU;
    turns.round() as i32
}

/// `wrap(−½·Δφ·(1 − cos θ))`.
pub fn berry_phase_analytic(theta: f64, delta_phi: f64) -> f64 {
    wrap(-0.5 * delta_phi * (1.0 - theta.cos()))
}

pub fn berry_phase_loop(p: &SystemParams, spec: &LoopSpec) -> Result<BerryLoopResult> {
    let states = loop_states(p, spec)?;
    let angles: Vec<BlochAngles> = states.iter().map(bloch_angles).collect();
    let winding = azimuth_winding(&angles);
    let theta = angles.iter().map(|a| a.theta).sum::<f64>() / angles.len() as f64;
    Ok(BerryLoopResult {
        gamma_discrete: wilson_loop_phase(&states),
        gamma_analytic: berry_phase_analytic(theta, TAU * winding as f64),
        theta,
        winding,
        steps: spec.steps,
    })
}

/// Central finite-difference connection components `(⟨ψ|∂_θψ⟩, ⟨ψ|∂_φψ⟩)` at
/// `(theta, phi)` with step `h`; analytically `(0, i·sin²(θ/2))`.
pub fn connection_derivatives(theta: f64, phi: f64, h: f64) -> (Complex64, Complex64) {
    let at = |t: f64, f: f64| ModalState::from_bloch(BlochAngles { theta: t, phi: f });
    let psi = at(theta, phi);
    let diff = |plus: ModalState, minus: ModalState| ModalState {
        alpha: (plus.alpha - minus.alpha) / (2.0 * h),
        beta: (plus.beta - minus.beta) / (2.0 * h),
        norm: 1.0,
    };
    let d_theta = diff(at(theta + h, phi), at(theta - h, phi));
    let d_phi = diff(at(theta, phi + h), at(theta, phi - h));
    (
        berry_connection(&psi, &d_theta),
        berry_connection(&psi, &d_phi),
    )
}

/// One cell of a `(ω_D, ℰ)` sweep. A cell whose loop could not be evaluated
/// holds `NaN` and the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub omega: f64,
    pub ratio: f64,
    pub gamma_abs: f64,
    pub diagnostic: Option<String>,
}

/// Row-major surface: one row per frequency, one column per ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSurface {
    pub omegas: Vec<f64>,
    pub ratios: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepSurface {
    pub fn cell(&self, row: usize, col: usize) -> &SweepCell {
        &self.cells[row * self.ratios.len() + col]
    }

    pub fn row(&self, row: usize) -> &[SweepCell] {
        let n = self.ratios.len();
        &self.cells[row * n..(row + 1) * n]
    }

    /// Ratio with the largest `|γ|` in a row (first one on ties, NaN cells skipped).
    pub fn row_argmax(&self, row: usize) -> Option<f64> {
        self.row(row)
            .iter()
            .filter(|c| c.gamma_abs.is_finite())
            .fold(None::<&SweepCell>, |best, c| match best {
                Some(b) if b.gamma_abs >= c.gamma_abs => Some(b),
                _ => Some(c),
            })
            .map(|c| c.ratio)
    }
}

/// `|γ|` over a grid of frequencies strictly between the eigenfrequencies and
/// ratios in [0, 1]. Cells run in parallel on the current rayon pool and are
/// assembled by grid index.
pub fn berry_sweep(
    p: &SystemParams,
    omegas: &[f64],
    ratios: &[f64],
    steps: usize,
) -> Result<SweepSurface> {
    p.validate()?;
    ensure(!omegas.is_empty() && !ratios.is_empty(), || {
        "sweep grids must be nonempty".to_string()
    })?;
    ensure(steps >= MIN_LOOP_STEPS, || {
        format!("loop needs at least {MIN_LOOP_STEPS} steps, got {steps}")
    })?;
    let eig = eigenfrequencies(p);
    if let Some(w) = omegas.iter().find(|&&w| !eig.contains(w)) {
        return Err(invalid(format!(
            "sweep frequency {w} outside the open interval ({}, {})",
            eig.in_phase, eig.out_of_phase
        )));
    }
    if let Some(e) = ratios.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(invalid(format!(
            "mixing ratio eps must lie in [0, 1], got {e}"
        )));
    }

    let ncol = ratios.len();
    let cells = (0..omegas.len() * ncol)
        .into_par_iter()
        .map(|idx| evaluate_cell(p, omegas[idx / ncol], ratios[idx % ncol], steps))
        .collect();
    Ok(SweepSurface {
        omegas: omegas.to_vec(),
        ratios: ratios.to_vec(),
        cells,
    })
}

fn evaluate_cell(p: &SystemParams, omega: f64, ratio: f64, steps: usize) -> SweepCell {
    let outcome = LoopSpec::new(ratio, omega, steps).and_then(|spec| berry_phase_loop(p, &spec));
    match outcome {
        Ok(r) => SweepCell {
            omega,
            ratio,
            gamma_abs: r.gamma_discrete.abs(),
            diagnostic: None,
        },
        Err(e) => SweepCell {
            omega,
            ratio,
            gamma_abs: f64::NAN,
            diagnostic: Some(e.to_string()),
        },
    }
}

/// Mixing ratio at which a δ-loop at `omega` reaches `|γ| = π` in the
/// small-damping limit.
///
/// Evaluated as `(ω² − ω01²)/(ω02² − ω01²)`, which equals
/// `(2ω² + ω01² − ω02²)/4` in the non-dimensional units `ω01 = 1`,
/// `ω02 = √3` and stays inside [0, 1] for any mass and stiffness.
pub fn transition_eps(omega: f64, e: &EigenPair) -> Result<f64> {
    if !e.contains(omega) {
        return Err(Error::InvalidParameter(format!(
            "transition requires {} < omega_d < {}, got {omega}",
            e.in_phase, e.out_of_phase
        )));
    }
    let lo = e.in_phase * e.in_phase;
    let hi = e.out_of_phase * e.out_of_phase;
    Ok(((omega * omega - lo) / (hi - lo)).clamp(0.0, 1.0))
}
