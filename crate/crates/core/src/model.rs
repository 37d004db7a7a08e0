//! Contact parameters, linearized stiffness and eigenfrequencies of the
//! two-granule chain.
//!
//! Each granule sits between a driven wall contact and the shared
//! granule-granule contact, all three Hertzian with the same stiffness and
//! static overlap. Linearizing about the pre-compressed equilibrium gives the
//! coupling stiffness `k_L`, which (together with the mass) is all the
//! frequency-domain pipeline needs.

use std::f64::consts::PI;

use crate::error::{ensure, invalid, Result};

/// Elastic and geometric properties of identical spherical granules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub radius: f64,
    pub density: f64,
    /// Static pre-compression overlap.
    pub precompression: f64,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.youngs_modulus.is_finite() && self.youngs_modulus > 0.0,
            || format!("Young's modulus must be > 0, got {}", self.youngs_modulus),
        )?;
        ensure((0.0..0.5).contains(&self.poisson_ratio), || {
            format!(
                "Poisson ratio must lie in [0, 0.5), got {}",
                self.poisson_ratio
            )
        })?;
        ensure(self.radius.is_finite() && self.radius > 0.0, || {
            format!("radius must be > 0, got {}", self.radius)
        })?;
        ensure(self.density.is_finite() && self.density > 0.0, || {
            format!("density must be > 0, got {}", self.density)
        })?;
        ensure(
            self.precompression.is_finite() && self.precompression > 0.0,
            || format!("pre-compression must be > 0, got {}", self.precompression),
        )
    }
}

/// Hertzian contact law `k_NL · [σ0 + x]_+^{3/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HertzContact {
    pub k_nl: f64,
    pub sigma0: f64,
}

/// Non-dimensional system parameters.
///
/// `contact` is optional provenance: it is only needed by the nonlinear
/// integrator. When present, `k_linear` equals `1.5 · k_nl · sqrt(sigma0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub mass: f64,
    pub k_linear: f64,
    pub damping: f64,
    pub contact: Option<HertzContact>,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            mass: 1.0,
            k_linear: 1.0,
            damping: 0.003,
            contact: None,
        }
    }
}

impl SystemParams {
    pub fn new(mass: f64, k_linear: f64, damping: f64) -> Result<Self> {
        let p = SystemParams {
            mass,
            k_linear,
            damping,
            contact: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the linear parameters from a Hertzian contact.
    pub fn from_contact(mass: f64, k_nl: f64, sigma0: f64, damping: f64) -> Result<Self> {
        let lin = linearize(k_nl, sigma0)?;
        let p = SystemParams {
            mass,
            k_linear: lin.k_linear,
            damping,
            contact: Some(HertzContact { k_nl, sigma0 }),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_material(mat: &MaterialSpec, damping: f64) -> Result<Self> {
        let (k_nl, mass) = hertz_params(mat)?;
        Self::from_contact(mass, k_nl, mat.precompression, damping)
    }

    /// Keeps `k_linear` fixed and attaches the contact stiffness that
    /// reproduces it at pre-compression `sigma0`.
    pub fn with_precompression(self, sigma0: f64) -> Result<Self> {
        ensure(sigma0.is_finite() && sigma0 > 0.0, || {
            format!("sigma0 must be > 0, got {sigma0}")
        })?;
        let k_nl = self.k_linear / (1.5 * sigma0.sqrt());
        let p = SystemParams {
            contact: Some(HertzContact { k_nl, sigma0 }),
            ..self
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.mass.is_finite() && self.mass > 0.0, || {
            format!("mass m must be > 0, got {}", self.mass)
        })?;
        ensure(self.k_linear.is_finite() && self.k_linear > 0.0, || {
            format!("linear stiffness k_L must be > 0, got {}", self.k_linear)
        })?;
        ensure(self.damping.is_finite() && self.damping >= 0.0, || {
            format!("damping eta must be >= 0, got {}", self.damping)
        })?;
        if let Some(c) = self.contact {
            let lin = linearize(c.k_nl, c.sigma0)?;
            let rel = (lin.k_linear - self.k_linear).abs() / self.k_linear;
            ensure(rel <= 1e-12, || {
                format!(
                    "k_L = {} is inconsistent with 1.5·k_NL·sqrt(sigma0) = {}",
                    self.k_linear, lin.k_linear
                )
            })?;
        }
        Ok(())
    }
}

/// Contact stiffness and granule mass from material constants:
/// `k_NL = E·sqrt(2R) / (3(1 − ν²))`, `m = (4/3)πρR³`.
pub fn hertz_params(mat: &MaterialSpec) -> Result<(f64, f64)> {
    if mat.poisson_ratio.abs() >= 1.0 {
        return Err(invalid(format!(
            "Poisson ratio {} makes the contact stiffness singular",
            mat.poisson_ratio
        )));
    }
    mat.validate()?;
    let k_nl = mat.youngs_modulus * (2.0 * mat.radius).sqrt()
        / (3.0 * (1.0 - mat.poisson_ratio * mat.poisson_ratio));
    let mass = 4.0 / 3.0 * PI * mat.density * mat.radius.powi(3);
    Ok((k_nl, mass))
}

/// First three Taylor coefficients of the pre-compressed contact.
///
/// `k2 = −(3/8)·k_NL/√σ0` and `k3 = −(1/16)·k_NL/σ0^{3/2}` are reported with
/// negative signs, although the binomial series of `(1+x)^{3/2}` has `+3/8`
/// as its quadratic coefficient. Neither value feeds any computation here
/// since the integrator uses the exact contact law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedStiffness {
    pub k_linear: f64,
    pub k2: f64,
    pub k3: f64,
}

pub fn linearize(k_nl: f64, sigma0: f64) -> Result<LinearizedStiffness> {
    ensure(k_nl.is_finite() && k_nl > 0.0, || {
        format!("k_NL must be > 0, got {k_nl}")
    })?;
    ensure(sigma0.is_finite() && sigma0 > 0.0, || {
        format!("sigma0 must be > 0, got {sigma0}")
    })?;
    let root = sigma0.sqrt();
    Ok(LinearizedStiffness {
        k_linear: 1.5 * k_nl * root,
        k2: -3.0 / 8.0 * k_nl / root,
        k3: -1.0 / 16.0 * k_nl / (sigma0 * root),
    })
}

/// Real part of the coefficient matrix of the steady amplitude equations.
pub fn stiffness_matrix(p: &SystemParams, omega: f64) -> [[f64; 2]; 2] {
    let diag = -p.mass * omega * omega + 2.0 * p.k_linear;
    [[diag, -p.k_linear], [-p.k_linear, diag]]
}

/// In-phase and out-of-phase eigenfrequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub in_phase: f64,
    pub out_of_phase: f64,
}

impl EigenPair {
    /// True for frequencies strictly between the two eigenfrequencies.
    pub fn contains(&self, omega: f64) -> bool {
        omega > self.in_phase && omega < self.out_of_phase
    }
}

pub fn eigenfrequencies(p: &SystemParams) -> EigenPair {
    EigenPair {
        in_phase: (p.k_linear / p.mass).sqrt(),
        out_of_phase: (3.0 * p.k_linear / p.mass).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(k: [[f64; 2]; 2]) -> f64 {
        k[0][0] * k[1][1] - k[0][1] * k[1][0]
    }

    fn material(e: f64, nu: f64, r: f64, rho: f64) -> MaterialSpec {
        MaterialSpec {
            youngs_modulus: e,
            poisson_ratio: nu,
            radius: r,
            density: rho,
            precompression: 0.1,
        }
    }

    #[test]
    fn hertz_params_unit_stiffness() {
        let (k, _) = hertz_params(&material(3.0, 0.0, 0.5, 1.0)).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
        let (_, m) = hertz_params(&material(3.0, 0.0, 0.5, 1.909859)).unwrap();
        assert!((m - 1.0).abs() < 1e-5);
    }

    #[test]
    fn hertz_params_radius_scaling() {
        let (k1, m1) = hertz_params(&material(200.0, 0.3, 0.7, 7.8)).unwrap();
        let (k2, m2) = hertz_params(&material(200.0, 0.3, 1.4, 7.8)).unwrap();
        assert!((k2 / k1 - 2f64.sqrt()).abs() < 1e-12);
        assert!((m2 / m1 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn hertz_params_rejects_bad_poisson() {
        assert!(hertz_params(&material(1.0, 1.0, 1.0, 1.0)).is_err());
        assert!(hertz_params(&material(1.0, 0.5, 1.0, 1.0)).is_err());
        assert!(hertz_params(&material(1.0, -0.1, 1.0, 1.0)).is_err());
        assert!(hertz_params(&material(0.0, 0.2, 1.0, 1.0)).is_err());
    }

    #[test]
    fn linearize_reference_values() {
        let lin = linearize(1.0, 4.0 / 9.0).unwrap();
        assert!((lin.k_linear - 1.0).abs() < 1e-15);
        assert!((lin.k2 + 0.5625).abs() < 1e-15);
        assert!((lin.k3 + 0.2109375).abs() < 1e-15);
        assert!((linearize(2.0, 1.0).unwrap().k_linear - 3.0).abs() < 1e-15);
    }

    #[test]
    fn linearize_high_precompression_suppresses_higher_orders() {
        let mut last = f64::INFINITY;
        for s in [1.0, 1e2, 1e4, 1e6] {
            let lin = linearize(1.0, s).unwrap();
            let r2 = (lin.k2 / lin.k_linear).abs();
            let r3 = (lin.k3 / lin.k_linear).abs();
            assert!(r2 < last);
            assert!((r2 - 0.25 / s).abs() < 1e-15 * (1.0 + r2));
            assert!((r3 - 1.0 / (24.0 * s * s)).abs() < 1e-15);
            last = r2;
        }
    }

    #[test]
    fn linearize_rejects_nonpositive() {
        assert!(linearize(0.0, 1.0).is_err());
        assert!(linearize(1.0, -1.0).is_err());
        assert!(linearize(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn linear_stiffness_is_slope_of_contact_law() {
        for (k_nl, s0) in [(1.0, 4.0 / 9.0), (2.5, 0.01), (0.3, 7.0), (10.0, 1e3)] {
            let h = 1e-6 * s0;
            let f = |x: f64| k_nl * (s0 + x).powf(1.5);
            let slope = (f(h) - f(-h)) / (2.0 * h);
            let k_l = linearize(k_nl, s0).unwrap().k_linear;
            assert!((slope - k_l).abs() / k_l < 1e-6, "{slope} vs {k_l}");
        }
    }

    #[test]
    fn stiffness_matrix_examples() {
        let p = SystemParams::default();
        assert_eq!(stiffness_matrix(&p, 0.0), [[2.0, -1.0], [-1.0, 2.0]]);
        let k = stiffness_matrix(&p, 2f64.sqrt());
        assert!(k[0][0].abs() < 1e-15 && k[1][1].abs() < 1e-15);
        assert_eq!(k[0][1], -1.0);
        let e = eigenfrequencies(&p);
        assert!(det(stiffness_matrix(&p, e.in_phase)).abs() < 1e-14);
        assert!(det(stiffness_matrix(&p, e.out_of_phase)).abs() < 1e-14);
    }

    #[test]
    fn determinant_brackets_each_eigenfrequency_once() {
        for (m, k) in [(1.0, 1.0), (4.0, 1.0), (0.3, 2.7)] {
            let p = SystemParams::new(m, k, 0.0).unwrap();
            let e = eigenfrequencies(&p);
            let intervals = [
                (0.0, e.in_phase),
                (e.in_phase, e.out_of_phase),
                (e.out_of_phase, 3.0 * e.out_of_phase),
            ];
            for (lo, hi) in intervals {
                let grid: Vec<f64> = (0..=400)
                    .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 401.0)
                    .collect();
                let signs: Vec<f64> = grid
                    .iter()
                    .map(|&w| det(stiffness_matrix(&p, w)).signum())
                    .collect();
                let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
                assert_eq!(
                    changes, 0,
                    "no interior sign change expected in ({lo}, {hi})"
                );
            }
            // One sign change across each eigenfrequency.
            for w0 in [e.in_phase, e.out_of_phase] {
                let below = det(stiffness_matrix(&p, w0 * (1.0 - 1e-6)));
                let above = det(stiffness_matrix(&p, w0 * (1.0 + 1e-6)));
                assert!(below * above < 0.0);
            }
        }
    }

    #[test]
    fn eigenfrequency_examples() {
        let e = eigenfrequencies(&SystemParams::default());
        assert_eq!(e.in_phase, 1.0);
        assert!((e.out_of_phase - 3f64.sqrt()).abs() < 1e-15);
        let e = eigenfrequencies(&SystemParams::new(4.0, 1.0, 0.0).unwrap());
        assert!((e.in_phase - 0.5).abs() < 1e-15);
        assert!((e.out_of_phase - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let e = eigenfrequencies(&SystemParams::new(1.0, 2.0, 0.0).unwrap());
        assert!((e.in_phase - 2f64.sqrt()).abs() < 1e-15);
        assert!((e.out_of_phase - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eigenfrequency_ratio_is_root_three() {
        for (m, k) in [(1.0, 1.0), (0.01, 30.0), (17.0, 0.2), (3.3, 3.3)] {
            let e = eigenfrequencies(&SystemParams::new(m, k, 0.1).unwrap());
            assert!((e.out_of_phase / e.in_phase - 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn system_params_validation() {
        assert!(SystemParams::new(0.0, 1.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, -0.1).is_err());
        let p = SystemParams::from_contact(1.0, 1.0, 4.0 / 9.0, 0.003).unwrap();
        assert!((p.k_linear - 1.0).abs() < 1e-15);
        let bad = SystemParams { k_linear: 1.1, ..p };
        assert!(bad.validate().is_err());
        let q = SystemParams::default().with_precompression(1e4).unwrap();
        assert!(q.validate().is_ok());
    }
}
