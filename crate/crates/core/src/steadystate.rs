//! Frequency-domain response: driver settings → complex granule amplitudes →
//! modal coefficients over the in-phase/out-of-phase basis → Bloch angles,
//! plus the closed-form inverse from a Bloch target back to driver settings.
//!
//! Conventions: the azimuth is `arg β − arg α`, all angles are principal
//! values in (−π, π], and at the poles (θ within [`POLE_TOLERANCE`] of 0 or π)
//! the azimuth is reported as 0.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::angle::wrap;
use crate::error::{ensure, Error, Result};
use crate::model::SystemParams;

pub const POLE_TOLERANCE: f64 = 1e-12;

/// Driver triple: mixing ratio ℰ, phase offset δ and driving frequency ω_D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub ratio: f64,
    pub phase: f64,
    pub omega: f64,
}

impl DriveSpec {
    pub fn new(ratio: f64, phase: f64, omega: f64) -> Result<Self> {
        let d = DriveSpec {
            ratio,
            phase,
            omega,
        };
        d.validate()?;
        Ok(d)
    }

    /// δ = −π is accepted alongside (−π, π] since it names the same drive.
    pub fn validate(&self) -> Result<()> {
        ensure((0.0..=1.0).contains(&self.ratio), || {
            format!("mixing ratio eps must lie in [0, 1], got {}", self.ratio)
        })?;
        ensure(self.phase.is_finite() && self.phase.abs() <= PI, || {
            format!(
                "phase offset delta must lie in [-pi, pi], got {}",
                self.phase
            )
        })?;
        ensure(self.omega.is_finite() && self.omega > 0.0, || {
            format!("driving frequency omega_d must be > 0, got {}", self.omega)
        })
    }

    pub fn forces(&self) -> (Complex64, Complex64) {
        drive_amplitudes(self.ratio, self.phase)
    }
}

/// `F1 = ℰ + (1−ℰ)e^{iδ}`, `F2 = ℰ − (1−ℰ)e^{iδ}`.
pub fn drive_amplitudes(ratio: f64, phase: f64) -> (Complex64, Complex64) {
    let swing = Complex64::from_polar(1.0 - ratio, phase);
    let common = Complex64::new(ratio, 0.0);
    (common + swing, common - swing)
}

/// Modal denominators `d1 = −mω² + k_L + iηω` (in-phase) and
/// `d2 = −mω² + 3k_L + iηω` (out-of-phase).
pub(crate) fn modal_denominators(p: &SystemParams, omega: f64) -> Result<(Complex64, Complex64)> {
    let inertia = p.mass * omega * omega;
    let loss = p.damping * omega;
    let d1 = Complex64::new(p.k_linear - inertia, loss);
    let d2 = Complex64::new(3.0 * p.k_linear - inertia, loss);
    let scale = inertia + 3.0 * p.k_linear;
    if d1.norm() <= POLE_TOLERANCE * scale || d2.norm() <= POLE_TOLERANCE * scale {
        return Err(Error::SingularDrive { omega });
    }
    Ok((d1, d2))
}

/// Complex displacement amplitudes of the two granules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyAmplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl SteadyAmplitudes {
    /// Largest residual of the two simultaneous amplitude equations, relative
    /// to the coefficient scale and `max(|A1|, |A2|, 1)`.
    pub fn residual(&self, p: &SystemParams, d: &DriveSpec) -> f64 {
        let w = d.omega;
        let a = Complex64::new(-p.mass * w * w + 2.0 * p.k_linear, p.damping * w);
        let k = p.k_linear;
        let (f1, f2) = d.forces();
        let r1 = a * self.a1 - k * self.a2 - k * f1;
        let r2 = -k * self.a1 + a * self.a2 - k * f2;
        let scale = a.norm().max(k) * self.a1.norm().max(self.a2.norm()).max(1.0);
        r1.norm().max(r2.norm()) / scale
    }

    pub fn is_finite(&self) -> bool {
        self.a1.is_finite() && self.a2.is_finite()
    }
}

/// Solves `(−mω²+2k_L+iηω)A1 − k_L A2 = k_L F1` and its mirror for the
/// second granule.
pub fn steady_amplitudes(p: &SystemParams, d: &DriveSpec) -> Result<SteadyAmplitudes> {
    p.validate()?;
    d.validate()?;
    let (d1, d2) = modal_denominators(p, d.omega)?;
    let w = d.omega;
    let k = p.k_linear;
    let a = Complex64::new(-p.mass * w * w + 2.0 * k, p.damping * w);
    // (a − k)(a + k) factorizes the determinant without cancellation.
    let det = d1 * d2;
    let (f1, f2) = d.forces();
    Ok(SteadyAmplitudes {
        a1: (f1 * k * a + f2 * k * k) / det,
        a2: (f1 * k * k + f2 * k * a) / det,
    })
}

/// Normalized coefficients over `E1 = (1,1)/√2` and `E2 = (1,−1)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalState {
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Magnitude of the coefficient pair before normalization.
    pub norm: f64,
}

impl ModalState {
    /// Normalizes an arbitrary nonzero coefficient pair.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm().hypot(beta.norm());
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(ModalState {
            alpha: alpha / norm,
            beta: beta / norm,
            norm,
        })
    }

    /// `cos(θ/2)|E1⟩ + e^{iφ} sin(θ/2)|E2⟩`.
    pub fn from_bloch(angles: BlochAngles) -> Self {
        let half = 0.5 * angles.theta;
        ModalState {
            alpha: Complex64::new(half.cos(), 0.0),
            beta: Complex64::from_polar(half.sin(), angles.phi),
            norm: 1.0,
        }
    }

    pub fn e1() -> Self {
        ModalState {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            norm: 1.0,
        }
    }

    pub fn e2() -> Self {
        ModalState {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
            norm: 1.0,
        }
    }

    /// Normalized state as displacement components `(u1, u2)`.
    pub fn to_displacement(&self) -> [Complex64; 2] {
        [
            (self.alpha + self.beta) * FRAC_1_SQRT_2,
            (self.alpha - self.beta) * FRAC_1_SQRT_2,
        ]
    }

    pub fn from_displacement(u: [Complex64; 2]) -> Result<Self> {
        Self::new((u[0] + u[1]) * FRAC_1_SQRT_2, (u[0] - u[1]) * FRAC_1_SQRT_2)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// Multiplies both coefficients by `e^{i·phase}`.
    pub fn rephased(&self, phase: f64) -> Self {
        let g = Complex64::from_polar(1.0, phase);
        ModalState {
            alpha: self.alpha * g,
            beta: self.beta * g,
            norm: self.norm,
        }
    }
}

pub fn modal_coefficients(a: &SteadyAmplitudes) -> Result<ModalState> {
    if a.a1 == Complex64::new(0.0, 0.0) && a.a2 == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroState);
    }
    ModalState::from_displacement([a.a1, a.a2])
}

/// Polar and azimuthal angles of a modal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        ensure((0.0..=PI).contains(&theta), || {
            format!("polar angle theta must lie in [0, pi], got {theta}")
        })?;
        ensure(phi.is_finite(), || {
            format!("azimuth phi must be finite, got {phi}")
        })?;
        Ok(BlochAngles {
            theta,
            phi: wrap(phi),
        })
    }

    pub fn is_pole(&self) -> bool {
        self.theta <= POLE_TOLERANCE || self.theta >= PI - POLE_TOLERANCE
    }
}

/// `θ = 2·acos|α|` (evaluated as `2·atan2(|β|, |α|)`), `φ = arg β − arg α`.
pub fn bloch_angles(s: &ModalState) -> BlochAngles {
    let theta = 2.0 * s.beta.norm().atan2(s.alpha.norm());
    let pole = theta <= POLE_TOLERANCE || theta >= PI - POLE_TOLERANCE;
    let phi = if pole {
        0.0
    } else {
        wrap(s.beta.arg() - s.alpha.arg())
    };
    BlochAngles { theta, phi }
}

/// Driver settings `(ℰ, δ)` that steer the steady state to `target` at
/// driving frequency `omega`.
///
/// With `q = |d1|/|d2|`, `ℰ = q·cos(θ/2) / (q·cos(θ/2) + sin(θ/2))` and
/// `δ = φ + arg d2 − arg d1`. The north pole maps to `(1, 0)`.
pub fn drive_for_bloch(target: &BlochAngles, p: &SystemParams, omega: f64) -> Result<(f64, f64)> {
    p.validate()?;
    ensure(omega.is_finite() && omega > 0.0, || {
        format!("driving frequency omega_d must be > 0, got {omega}")
    })?;
    let target = BlochAngles::new(target.theta, target.phi)?;
    let (d1, d2) = modal_denominators(p, omega)?;
    if target.theta <= POLE_TOLERANCE {
        return Ok((1.0, 0.0));
    }
    let (ratio, phi) = if target.theta >= PI - POLE_TOLERANCE {
        (0.0, 0.0)
    } else {
        let q = d1.norm() / d2.norm();
        let half = 0.5 * target.theta;
        let num = q * half.cos();
        (num / (num + half.sin()), target.phi)
    };
    Ok((ratio, wrap(phi + d2.arg() - d1.arg())))
}

/// Full forward pipeline for one drive point.
pub fn drive_to_bloch(p: &SystemParams, d: &DriveSpec) -> Result<BlochAngles> {
    let amps = steady_amplitudes(p, d)?;
    Ok(bloch_angles(&modal_coefficients(&amps)?))
}
