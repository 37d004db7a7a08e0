//! Classical two-level "elastic bit" built from two Hertzian granules driven
//! by a pair of harmonic forces.
//!
//! The crate covers the whole linearized pipeline: contact parameters and
//! eigenfrequencies ([`model`]), driver settings to steady amplitudes and
//! Bloch angles ([`steadystate`]), quantum-analog gates ([`gates`]), loop
//! Berry phases and the transition curve ([`berry`]), amplitude and phase
//! diagnostics ([`analysis`]), and a time-domain RK4 integrator of the
//! nonlinear and linear equations of motion ([`dynamics`]) that serves as an
//! independent check on the frequency-domain results.

pub mod analysis;
pub mod angle;
pub mod berry;
pub mod dynamics;
mod error;
pub mod gates;
pub mod model;
pub mod steadystate;

pub use num_complex::Complex64;

pub use analysis::{
    classify_zone, mass_amplitude_curves, phase_differences, response_table, AmplitudeRow,
    PhasePair, ResponseRow, ZoneLabel, DEFAULT_ZONE_TOLERANCE,
};
pub use berry::{
    berry_connection, berry_phase_analytic, berry_phase_loop, berry_sweep, loop_phase_samples,
    loop_states, transition_eps, wilson_loop_phase, BerryLoopResult, LoopSpec, SweepCell,
    SweepSurface,
};
pub use dynamics::{
    default_step, extract_steady, hertz_force, hertz_potential, integrate, integrate_forcing,
    mechanical_energy, oracle_report, relative_error, transient_cut, ForceModel, Forcing,
    IntegratorConfig, OracleReport, Sample, TimeSeries,
};
pub use error::{Error, Result};
pub use gates::{apply_gate, gate_as_drive, gate_matrix, GateKind, Unitary2};
pub use model::{
    eigenfrequencies, hertz_params, linearize, stiffness_matrix, EigenPair, HertzContact,
    LinearizedStiffness, MaterialSpec, SystemParams,
};
pub use steadystate::{
    bloch_angles, drive_amplitudes, drive_for_bloch, drive_to_bloch, modal_coefficients,
    steady_amplitudes, BlochAngles, DriveSpec, ModalState, SteadyAmplitudes,
};
