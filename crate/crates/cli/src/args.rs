use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "elasticbit",
    version,
    about = "Frequency- and time-domain analysis of a driven two-granule elastic bit"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Flat JSON object of parameter values; explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Granule mass.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,

    /// Linearized contact stiffness k_L.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<f64>,

    /// Viscous damping coefficient.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the table here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Print angle columns in degrees. Inputs stay in radians.
    #[arg(long, global = true)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Linear,
    Nonlinear,
}

/// Single drive point. Every field can also come from the config file.
#[derive(Debug, Args)]
pub struct DrivePoint {
    /// Driving frequency omega_D.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,

    /// Mixing ratio between the two modal drives, in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,

    /// Phase offset delta between the drives, in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// In-phase and out-of-phase eigenfrequencies.
    Eig,

    /// Granule amplitudes and phase differences over a delta grid.
    Steady {
        #[command(flatten)]
        drive: DrivePoint,
        /// Number of delta samples spanning [-pi, pi].
        #[arg(long)]
        points: Option<usize>,
    },

    /// Bloch-sphere angles of one drive point.
    Bloch {
        #[command(flatten)]
        drive: DrivePoint,
    },

    /// Apply a gate to a Bloch state and report the drive realizing the result.
    Gate {
        /// x, y, z, h, s, t or phase:<radians>.
        #[arg(long)]
        gate: Option<String>,
        /// Polar angle of the input state.
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Azimuth of the input state.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Frequency at which the output drive is computed.
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
    },

    /// Berry phase of one closed delta loop.
    Berry {
        /// Driving frequency omega_D.
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
        /// Mixing ratio in [0, 1].
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        /// Number of loop samples.
        #[arg(long)]
        steps: Option<usize>,
    },

    /// |Berry phase| over an (omega_D, eps) grid.
    BerrySweep {
        /// Lower end of the frequency grid. Defaults to just above omega01.
        #[arg(long, allow_negative_numbers = true)]
        omega_min: Option<f64>,
        /// Upper end of the frequency grid. Defaults to just below omega02.
        #[arg(long, allow_negative_numbers = true)]
        omega_max: Option<f64>,
        /// Number of frequencies.
        #[arg(long)]
        omega_points: Option<usize>,
        /// Number of mixing ratios spanning [0, 1].
        #[arg(long)]
        eps_points: Option<usize>,
        /// Loop samples per grid cell.
        #[arg(long)]
        steps: Option<usize>,
        /// Worker threads. Defaults to the number of processors.
        #[arg(long, env = "ELASTICBIT_JOBS")]
        jobs: Option<usize>,
    },

    /// Transition ratio as a function of the driving frequency.
    Transition {
        /// Lower end of the frequency range.
        #[arg(long, allow_negative_numbers = true)]
        omega_min: Option<f64>,
        /// Upper end of the frequency range.
        #[arg(long, allow_negative_numbers = true)]
        omega_max: Option<f64>,
        /// Number of frequencies.
        #[arg(long)]
        points: Option<usize>,
    },

    /// Time-domain trajectory of both granules.
    Simulate {
        #[command(flatten)]
        drive: DrivePoint,
        #[arg(long, value_enum)]
        model: Option<Model>,
        /// Static pre-compression; required by the nonlinear model.
        #[arg(long, allow_negative_numbers = true)]
        sigma0: Option<f64>,
        /// Simulated time span.
        #[arg(long, allow_negative_numbers = true)]
        t_end: Option<f64>,
        /// Integration step. Defaults to min(0.005, T/200).
        #[arg(long, allow_negative_numbers = true)]
        dt: Option<f64>,
        /// Emit every n-th sample.
        #[arg(long)]
        every: Option<usize>,
    },

    /// Compare linear and nonlinear integration with the analytic steady state.
    Validate {
        #[command(flatten)]
        drive: DrivePoint,
        /// Static pre-compression of the nonlinear run.
        #[arg(long, allow_negative_numbers = true)]
        sigma0: Option<f64>,
        /// Simulated time span of each run.
        #[arg(long, allow_negative_numbers = true)]
        t_end: Option<f64>,
        /// Periods used for phasor extraction.
        #[arg(long)]
        cycles: Option<usize>,
    },
}
