//! Granule-level diagnostics of the topological transition: amplitude
//! localization along a δ sweep, mass–mass and mass–driver phase
//! differences, and zone labels around the transition ratio.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::angle::wrap;
use crate::berry::transition_eps;
use crate::error::{ensure, Error, Result};
use crate::model::{eigenfrequencies, SystemParams};
use crate::steadystate::{steady_amplitudes, DriveSpec, SteadyAmplitudes};

/// Half-width of the band around the transition ratio that is labelled
/// [`ZoneLabel::Transition`].
pub const DEFAULT_ZONE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeRow {
    pub delta: f64,
    pub abs_a1: f64,
    pub abs_a2: f64,
}

/// Principal-value phase differences `arg A1 − arg A2` and `arg A1 − arg F1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub m1_m2: f64,
    pub m1_d1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZoneLabel {
    BelowTransition,
    Transition,
    AboveTransition,
}

/// One row of the δ-sweep response table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseRow {
    pub delta: f64,
    pub abs_a1: f64,
    pub abs_a2: f64,
    pub phases: PhasePair,
}

pub fn mass_amplitude_curves(
    p: &SystemParams,
    omega: f64,
    ratio: f64,
    deltas: &[f64],
) -> Result<Vec<AmplitudeRow>> {
    ensure(!deltas.is_empty(), || {
        "delta grid must be nonempty".to_string()
    })?;
    deltas
        .iter()
        .map(|&delta| {
            let a = steady_amplitudes(p, &DriveSpec::new(ratio, delta, omega)?)?;
            Ok(AmplitudeRow {
                delta,
                abs_a1: a.a1.norm(),
                abs_a2: a.a2.norm(),
            })
        })
        .collect()
}

/// The driver reference is `F1` itself: the common `e^{iω_D t}` factor cancels.
pub fn phase_differences(a: &SteadyAmplitudes, f1: Complex64) -> Result<PhasePair> {
    let zero = Complex64::new(0.0, 0.0);
    if a.a1 == zero {
        return Err(Error::UndefinedPhase("granule 1 amplitude A1"));
    }
    if a.a2 == zero {
        return Err(Error::UndefinedPhase("granule 2 amplitude A2"));
    }
    if f1 == zero {
        return Err(Error::UndefinedPhase("driver amplitude F1"));
    }
    Ok(PhasePair {
        m1_m2: wrap(a.a1.arg() - a.a2.arg()),
        m1_d1: wrap(a.a1.arg() - f1.arg()),
    })
}

/// Amplitudes and phase differences for every δ in the grid.
pub fn response_table(
    p: &SystemParams,
    omega: f64,
    ratio: f64,
    deltas: &[f64],
) -> Result<Vec<ResponseRow>> {
    ensure(!deltas.is_empty(), || {
        "delta grid must be nonempty".to_string()
    })?;
    deltas
        .iter()
        .map(|&delta| {
            let d = DriveSpec::new(ratio, delta, omega)?;
            let a = steady_amplitudes(p, &d)?;
            let phases = phase_differences(&a, d.forces().0)?;
            Ok(ResponseRow {
                delta,
                abs_a1: a.a1.norm(),
                abs_a2: a.a2.norm(),
                phases,
            })
        })
        .collect()
}

/// Labels a ratio relative to the transition ratio at `omega`.
///
/// A ratio is above (below) the transition when it exceeds (falls short of)
/// the transition ratio by more than `tolerance` and the granules move in
/// phase (out of phase) at δ = −π. Anything else is `Transition`.
pub fn classify_zone(
    p: &SystemParams,
    omega: f64,
    ratio: f64,
    tolerance: f64,
) -> Result<ZoneLabel> {
    p.validate()?;
    ensure(tolerance.is_finite() && tolerance > 0.0, || {
        format!("zone tolerance must be > 0, got {tolerance}")
    })?;
    let critical = transition_eps(omega, &eigenfrequencies(p))?;
    let d = DriveSpec::new(ratio, -PI, omega)?;
    let a = steady_amplitudes(p, &d)?;
    let in_phase = match phase_differences(&a, d.forces().0) {
        Ok(pair) => Some(pair.m1_m2.abs() < FRAC_PI_2),
        Err(Error::UndefinedPhase(_)) => None,
        Err(e) => return Err(e),
    };
    let label = match in_phase {
        Some(true) if ratio > critical + tolerance => ZoneLabel::AboveTransition,
        Some(false) if ratio < critical - tolerance => ZoneLabel::BelowTransition,
        _ => ZoneLabel::Transition,
    };
    Ok(label)
}
