//! Quantum-analog gates acting on the elastic bit.
//!
//! Matrices are stored in the displacement basis `(u1, u2)`, where the modal
//! basis vectors are `E1 = (1,1)/√2` and `E2 = (1,−1)/√2`. In that basis the
//! bit flip is `diag(1, −1)` and the phase flip is the swap matrix. The
//! Hadamard-like matrix `V = (1/√2)[[1,1],[1,−1]]` is its own inverse and maps
//! between modal and displacement coordinates.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::angle::wrap;
use crate::error::{invalid, Error, Result};
use crate::model::SystemParams;
use crate::steadystate::{bloch_angles, drive_for_bloch, ModalState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    /// Quarter-turn phase gate, `PhaseShift(π/2)`.
    S,
    /// Eighth-turn phase gate, `PhaseShift(π/4)`.
    T,
    /// Adds the given angle to the azimuth.
    PhaseShift(f64),
}

impl GateKind {
    pub fn phase_shift(angle: f64) -> Self {
        GateKind::PhaseShift(wrap(angle))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::X => write!(f, "x"),
            GateKind::Y => write!(f, "y"),
            GateKind::Z => write!(f, "z"),
            GateKind::H => write!(f, "h"),
            GateKind::S => write!(f, "s"),
            GateKind::T => write!(f, "t"),
            GateKind::PhaseShift(a) => write!(f, "phase:{a}"),
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    /// Accepts `x`, `y`, `z`, `h`, `s`, `t` (any case) and `phase:<radians>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "t" => GateKind::T,
            other => {
                let angle = other
                    .strip_prefix("phase:")
                    .and_then(|a| a.parse::<f64>().ok())
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| {
                        invalid(format!(
                            "unknown gate '{s}': expected one of x, y, z, h, s, t, phase:<radians>"
                        ))
                    })?;
                GateKind::phase_shift(angle)
            }
        };
        Ok(kind)
    }
}

/// 2×2 complex matrix in the displacement basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub entries: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Unitary2 { entries }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Unitary2::new([[o, z], [z, o]])
    }

    /// Modal ↔ displacement change of basis (self-inverse).
    pub fn basis_change() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Unitary2::new([[a, a], [a, -a]])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Unitary2::new([[a, z], [z, b]])
    }

    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2::new(out)
    }

    pub fn pow(&self, n: u32) -> Unitary2 {
        (0..n).fold(Unitary2::identity(), |acc, _| acc.mul(self))
    }

    pub fn adjoint(&self) -> Unitary2 {
        let e = &self.entries;
        Unitary2::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let e = &self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_deviation(&self, other: &Unitary2) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_deviation(&Unitary2::identity())
    }

    /// The same operator expressed over the `(E1, E2)` basis.
    pub fn in_modal_basis(&self) -> Unitary2 {
        let v = Unitary2::basis_change();
        v.mul(self).mul(&v)
    }
}

pub fn gate_matrix(g: GateKind) -> Unitary2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match g {
        GateKind::X => Unitary2::diag(one, -one),
        GateKind::Y => Unitary2::new([[zero, i], [-i, zero]]),
        GateKind::Z => Unitary2::new([[zero, one], [one, zero]]),
        GateKind::H => Unitary2::basis_change(),
        GateKind::S => phase_shift_matrix(FRAC_PI_2),
        GateKind::T => phase_shift_matrix(FRAC_PI_4),
        GateKind::PhaseShift(a) => phase_shift_matrix(a),
    }
}

/// `V · diag(1, e^{iφ0}) · V`.
fn phase_shift_matrix(angle: f64) -> Unitary2 {
    let v = Unitary2::basis_change();
    let d = Unitary2::diag(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, angle));
    v.mul(&d).mul(&v)
}

/// Applies a gate in the displacement basis and returns the new modal state.
///
/// The pre-normalization magnitude is carried over unchanged.
pub fn apply_gate(g: GateKind, s: &ModalState) -> ModalState {
    let u = gate_matrix(g).apply(s.to_displacement());
    let v = Unitary2::basis_change().apply(u);
    let n = v[0].norm().hypot(v[1].norm());
    ModalState {
        alpha: v[0] / n,
        beta: v[1] / n,
        norm: s.norm,
    }
}

/// Driver settings `(ℰ, δ)` that realize the post-gate state at `omega`.
pub fn gate_as_drive(
    g: GateKind,
    s: &ModalState,
    p: &SystemParams,
    omega: f64,
) -> Result<(f64, f64)> {
    let target = bloch_angles(&apply_gate(g, s));
    drive_for_bloch(&target, p, omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::circular_diff;
    use crate::steadystate::{BlochAngles, DriveSpec};
    use std::f64::consts::{PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn same_vector(a: &ModalState, b: &ModalState) -> bool {
        (a.alpha - b.alpha).norm() < 1e-12 && (a.beta - b.beta).norm() < 1e-12
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in [
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::H,
            GateKind::S,
            GateKind::T,
            GateKind::PhaseShift(0.3),
            GateKind::PhaseShift(-2.9),
        ] {
            assert!(gate_matrix(g).unitarity_error() < 1e-12, "{g}");
        }
    }

    #[test]
    fn phase_shift_pi_is_phase_flip() {
        let dev = gate_matrix(GateKind::PhaseShift(PI)).max_deviation(&gate_matrix(GateKind::Z));
        assert!(dev < 1e-12);
    }

    #[test]
    fn modal_basis_forms_are_standard_paulis() {
        let x = gate_matrix(GateKind::X).in_modal_basis();
        let swap = Unitary2::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(x.max_deviation(&swap) < 1e-15);
        let z = gate_matrix(GateKind::Z).in_modal_basis();
        assert!(z.max_deviation(&Unitary2::diag(c(1.0, 0.0), c(-1.0, 0.0))) < 1e-15);
        let y = gate_matrix(GateKind::Y).in_modal_basis();
        let pauli_y = Unitary2::new([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
        assert!(y.max_deviation(&pauli_y) < 1e-15);
    }

    #[test]
    fn bit_flip_maps_e1_to_e2() {
        let out = apply_gate(GateKind::X, &ModalState::e1());
        assert!(same_vector(&out, &ModalState::e2()));
    }

    #[test]
    fn y_maps_e2_to_minus_i_e1() {
        let out = apply_gate(GateKind::Y, &ModalState::e2());
        assert!((out.alpha - c(0.0, -1.0)).norm() < 1e-12);
        assert!(out.beta.norm() < 1e-12);
    }

    #[test]
    fn hadamard_and_s_bloch_actions() {
        let h = bloch_angles(&apply_gate(GateKind::H, &ModalState::e1()));
        assert!((h.theta - FRAC_PI_2).abs() < 1e-12 && h.phi.abs() < 1e-12);
        let plus = ModalState::from_bloch(BlochAngles {
            theta: FRAC_PI_2,
            phi: 0.0,
        });
        let s = bloch_angles(&apply_gate(GateKind::S, &plus));
        assert!((s.theta - FRAC_PI_2).abs() < 1e-12);
        assert!((s.phi - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn x_twice_is_identity() {
        let s = ModalState::new(c(0.3, -0.2), c(-0.7, 0.5)).unwrap();
        let back = apply_gate(GateKind::X, &apply_gate(GateKind::X, &s));
        assert!(same_vector(&back, &s));
    }

    #[test]
    fn parse_gate_names() {
        assert_eq!("H".parse::<GateKind>().unwrap(), GateKind::H);
        assert_eq!("t".parse::<GateKind>().unwrap(), GateKind::T);
        assert_eq!(
            "phase:0.5".parse::<GateKind>().unwrap(),
            GateKind::PhaseShift(0.5)
        );
        assert!("cnot".parse::<GateKind>().is_err());
        assert!("phase:abc".parse::<GateKind>().is_err());
    }

    #[test]
    fn gate_as_drive_examples() {
        let p = SystemParams::default();
        let (e, d) = gate_as_drive(GateKind::H, &ModalState::e1(), &p, SQRT_2).unwrap();
        let fwd =
            crate::steadystate::drive_to_bloch(&p, &DriveSpec::new(e, d, SQRT_2).unwrap()).unwrap();
        assert!((fwd.theta - FRAC_PI_2).abs() < 1e-9);

        let (e, _) = gate_as_drive(GateKind::X, &ModalState::e1(), &p, SQRT_2).unwrap();
        assert_eq!(e, 0.0);

        let base = DriveSpec::new(0.5, 0.0, SQRT_2).unwrap();
        let s = crate::steadystate::modal_coefficients(
            &crate::steadystate::steady_amplitudes(&p, &base).unwrap(),
        )
        .unwrap();
        let (e, d) = gate_as_drive(GateKind::S, &s, &p, SQRT_2).unwrap();
        assert!((e - 0.5).abs() < 1e-12);
        assert!(circular_diff(d, FRAC_PI_2).abs() < 1e-12);
    }
}
