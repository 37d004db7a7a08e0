use std::f64::consts::{PI, SQRT_2};

use elasticbit::angle::linspace;
use elasticbit::{
    apply_gate, berry_phase_loop, berry_sweep, bloch_angles, default_step, eigenfrequencies,
    gate_as_drive, integrate, modal_coefficients, oracle_report, response_table, steady_amplitudes,
    transition_eps, BlochAngles, Complex64, DriveSpec, ForceModel, GateKind, IntegratorConfig,
    LoopSpec, ModalState, SteadyAmplitudes, SystemParams,
};

use crate::args::{Command, DrivePoint, Format, Model};
use crate::config::ConfigFile;
use crate::output::{Cell, Table};
use crate::CliError;

/// What a subcommand produced, before formatting.
pub struct Outcome {
    pub table: Table,
    pub default_format: OutputStyle,
    pub angle_columns: &'static [&'static str],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputStyle {
    /// Data rows only, comma separated.
    Plain,
    Styled(Format),
}

fn system_table(schema: &str, columns: &[&str], p: &SystemParams) -> Table {
    let t = Table::new(schema, columns)
        .param("m", p.mass)
        .param("k", p.k_linear)
        .param("eta", p.damping);
    match p.contact {
        Some(c) => t.param("sigma0", c.sigma0).param("k_nl", c.k_nl),
        None => t,
    }
}

fn drive(cfg: &ConfigFile, d: &DrivePoint, delta_default: f64) -> Result<DriveSpec, CliError> {
    let omega = cfg.f64(d.omega, "omega", SQRT_2)?;
    let eps = cfg.f64(d.eps, "eps", 0.5)?;
    let delta = cfg.f64(d.delta, "delta", delta_default)?;
    Ok(DriveSpec::new(eps, delta, omega)?)
}

fn with_drive(t: Table, d: &DriveSpec) -> Table {
    t.param("omega", d.omega)
        .param("eps", d.ratio)
        .param("delta", d.phase)
}

/// Default frequency window: 1% inside each eigenfrequency.
fn band(
    cfg: &ConfigFile,
    p: &SystemParams,
    lo: Option<f64>,
    hi: Option<f64>,
    points: usize,
) -> Result<Vec<f64>, CliError> {
    let e = eigenfrequencies(p);
    let lo = cfg.f64(lo, "omega_min", 1.01 * e.in_phase)?;
    let hi = cfg.f64(hi, "omega_max", 0.99 * e.out_of_phase)?;
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(CliError::Usage(format!(
            "omega_min must not exceed omega_max, got {lo} > {hi}"
        )));
    }
    positive_count(points, "omega points")?;
    Ok(linspace(lo, hi, points))
}

fn positive_count(n: usize, what: &str) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage(format!("{what} must be >= 1, got 0")));
    }
    Ok(())
}

fn amplitude_cells(a: &SteadyAmplitudes) -> [Cell; 4] {
    [
        Cell::Num(a.a1.re),
        Cell::Num(a.a1.im),
        Cell::Num(a.a2.re),
        Cell::Num(a.a2.im),
    ]
}

pub fn execute(command: &Command, cfg: &ConfigFile, p: &SystemParams) -> Result<Outcome, CliError> {
    let styled = |table, f, angle_columns| Outcome {
        table,
        default_format: OutputStyle::Styled(f),
        angle_columns,
    };
    match command {
        Command::Eig => {
            let e = eigenfrequencies(p);
            let mut t = system_table("eig", &["omega01", "omega02"], p);
            t.push(vec![Cell::Num(e.in_phase), Cell::Num(e.out_of_phase)]);
            Ok(Outcome {
                table: t,
                default_format: OutputStyle::Plain,
                angle_columns: &[],
            })
        }

        Command::Steady { drive: dp, points } => {
            let d = drive(cfg, dp, 0.0)?;
            let n = cfg.usize(*points, "points", 101)?;
            positive_count(n, "points")?;
            let rows = response_table(p, d.omega, d.ratio, &linspace(-PI, PI, n))?;
            let mut t = system_table(
                "steady",
                &["delta", "abs_a1", "abs_a2", "phi_m1_m2", "phi_m1_d1"],
                p,
            )
            .param("omega", d.omega)
            .param("eps", d.ratio)
            .param("points", n);
            for r in rows {
                t.push(vec![
                    Cell::Num(r.delta),
                    Cell::Num(r.abs_a1),
                    Cell::Num(r.abs_a2),
                    Cell::Num(r.phases.m1_m2),
                    Cell::Num(r.phases.m1_d1),
                ]);
            }
            Ok(styled(t, Format::Csv, &["delta", "phi_m1_m2", "phi_m1_d1"]))
        }

        Command::Bloch { drive: dp } => {
            let d = drive(cfg, dp, 0.0)?;
            let s = modal_coefficients(&steady_amplitudes(p, &d)?)?;
            let b = bloch_angles(&s);
            let mut t = with_drive(
                system_table(
                    "bloch",
                    &[
                        "theta", "phi", "alpha_re", "alpha_im", "beta_re", "beta_im", "norm",
                    ],
                    p,
                ),
                &d,
            );
            t.push(vec![
                Cell::Num(b.theta),
                Cell::Num(b.phi),
                Cell::Num(s.alpha.re),
                Cell::Num(s.alpha.im),
                Cell::Num(s.beta.re),
                Cell::Num(s.beta.im),
                Cell::Num(s.norm),
            ]);
            Ok(styled(t, Format::Json, &["theta", "phi"]))
        }

        Command::Gate {
            gate,
            theta,
            phi,
            omega,
        } => {
            let name = cfg.string(gate.clone(), "gate")?.ok_or_else(|| {
                CliError::Usage("gate requires --gate <x|y|z|h|s|t|phase:RAD>".into())
            })?;
            let kind: GateKind = name.parse()?;
            let input =
                BlochAngles::new(cfg.f64(*theta, "theta", 0.0)?, cfg.f64(*phi, "phi", 0.0)?)?;
            let omega = cfg.f64(*omega, "omega", SQRT_2)?;
            let state = ModalState::from_bloch(input);
            let out = bloch_angles(&apply_gate(kind, &state));
            let (eps, delta) = gate_as_drive(kind, &state, p, omega)?;
            let mut t = system_table(
                "gate",
                &["theta_in", "phi_in", "theta", "phi", "eps", "delta"],
                p,
            )
            .param("gate", kind.to_string())
            .param("omega", omega);
            t.push(vec![
                Cell::Num(input.theta),
                Cell::Num(input.phi),
                Cell::Num(out.theta),
                Cell::Num(out.phi),
                Cell::Num(eps),
                Cell::Num(delta),
            ]);
            Ok(styled(
                t,
                Format::Json,
                &["theta_in", "phi_in", "theta", "phi", "delta"],
            ))
        }

        Command::Berry { omega, eps, steps } => {
            let spec = LoopSpec::new(
                cfg.f64(*eps, "eps", 0.5)?,
                cfg.f64(*omega, "omega", SQRT_2)?,
                cfg.usize(*steps, "steps", 4096)?,
            )?;
            let r = berry_phase_loop(p, &spec)?;
            let mut t = system_table(
                "berry",
                &[
                    "gamma_discrete",
                    "gamma_analytic",
                    "theta",
                    "winding",
                    "steps",
                ],
                p,
            )
            .param("omega", spec.omega)
            .param("eps", spec.ratio);
            t.push(vec![
                Cell::Num(r.gamma_discrete),
                Cell::Num(r.gamma_analytic),
                Cell::Num(r.theta),
                Cell::Int(r.winding.into()),
                Cell::Int(r.steps as i64),
            ]);
            Ok(styled(
                t,
                Format::Json,
                &["gamma_discrete", "gamma_analytic", "theta"],
            ))
        }

        Command::BerrySweep {
            omega_min,
            omega_max,
            omega_points,
            eps_points,
            steps,
            jobs,
        } => {
            let omegas = band(
                cfg,
                p,
                *omega_min,
                *omega_max,
                cfg.usize(*omega_points, "omega_points", 61)?,
            )?;
            let n_eps = cfg.usize(*eps_points, "eps_points", 101)?;
            positive_count(n_eps, "eps points")?;
            let ratios = linspace(0.0, 1.0, n_eps);
            let steps = cfg.usize(*steps, "steps", 512)?;
            let jobs = match cfg.usize(*jobs, "jobs", 0)? {
                0 if jobs.is_some() => {
                    return Err(CliError::Usage("jobs must be >= 1, got 0".into()))
                }
                0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
                n => n,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
            let surface = pool.install(|| berry_sweep(p, &omegas, &ratios, steps))?;
            for c in surface
                .cells
                .iter()
                .filter_map(|c| c.diagnostic.as_ref().map(|d| (c, d)))
            {
                eprintln!("warning: omega_d={} eps={}: {}", c.0.omega, c.0.ratio, c.1);
            }
            let mut t = system_table("berry-sweep", &["omega_d", "eps", "gamma_abs"], p)
                .param("steps", steps);
            for c in &surface.cells {
                t.push(vec![
                    Cell::Num(c.omega),
                    Cell::Num(c.ratio),
                    Cell::Num(c.gamma_abs),
                ]);
            }
            Ok(styled(t, Format::Csv, &["gamma_abs"]))
        }

        Command::Transition {
            omega_min,
            omega_max,
            points,
        } => {
            let omegas = band(
                cfg,
                p,
                *omega_min,
                *omega_max,
                cfg.usize(*points, "points", 61)?,
            )?;
            let e = eigenfrequencies(p);
            let mut t = system_table("transition", &["omega_d", "eps_star"], p);
            for w in omegas {
                t.push(vec![Cell::Num(w), Cell::Num(transition_eps(w, &e)?)]);
            }
            Ok(styled(t, Format::Csv, &[]))
        }

        Command::Simulate {
            drive: dp,
            model,
            sigma0,
            t_end,
            dt,
            every,
        } => {
            let d = drive(cfg, dp, 0.0)?;
            let model = match model {
                Some(m) => *m,
                None => match cfg.string(None, "model")?.as_deref() {
                    None | Some("linear") => Model::Linear,
                    Some("nonlinear") => Model::Nonlinear,
                    Some(other) => {
                        return Err(CliError::Usage(format!(
                            "model must be 'linear' or 'nonlinear', got '{other}'"
                        )))
                    }
                },
            };
            let p = match cfg.opt_f64(*sigma0, "sigma0")? {
                Some(s) => p.with_precompression(s)?,
                None => *p,
            };
            let cfg_run = IntegratorConfig {
                model: match model {
                    Model::Linear => ForceModel::Linear,
                    Model::Nonlinear => ForceModel::Nonlinear,
                },
                dt: cfg.f64(*dt, "dt", default_step(d.omega))?,
                t_end: cfg.f64(*t_end, "t_end", 100.0)?,
                initial: [0.0; 4],
            };
            let every = cfg.usize(*every, "every", 1)?;
            positive_count(every, "every")?;
            let ts = integrate(&p, &d, &cfg_run)?;
            let mut t = with_drive(
                system_table("simulate", &["t", "u1", "v1", "u2", "v2"], &p),
                &d,
            )
            .param(
                "model",
                match model {
                    Model::Linear => "linear",
                    Model::Nonlinear => "nonlinear",
                },
            )
            .param("dt", cfg_run.dt)
            .param("t_end", cfg_run.t_end)
            .param("every", every);
            for s in ts.samples.iter().step_by(every) {
                t.push(vec![
                    Cell::Num(s.t),
                    Cell::Num(s.u1),
                    Cell::Num(s.v1),
                    Cell::Num(s.u2),
                    Cell::Num(s.v2),
                ]);
            }
            Ok(styled(t, Format::Csv, &[]))
        }

        Command::Validate {
            drive: dp,
            sigma0,
            t_end,
            cycles,
        } => {
            let d = drive(cfg, dp, PI)?;
            let default_sigma = p.contact.map_or(1e4, |c| c.sigma0);
            let p = p.with_precompression(cfg.f64(*sigma0, "sigma0", default_sigma)?)?;
            let t_end = cfg.f64(*t_end, "t_end", 6000.0)?;
            let cycles = cfg.usize(*cycles, "cycles", 10)?;
            let r = oracle_report(&p, &d, t_end, cycles)?;
            let nan = SteadyAmplitudes {
                a1: Complex64::new(f64::NAN, f64::NAN),
                a2: Complex64::new(f64::NAN, f64::NAN),
            };
            let mut t = with_drive(
                system_table(
                    "validate",
                    &[
                        "source",
                        "a1_re",
                        "a1_im",
                        "a2_re",
                        "a2_im",
                        "relative_error",
                    ],
                    &p,
                ),
                &d,
            )
            .param("t_end", t_end)
            .param("cycles", cycles)
            .param(
                "amplitude_ratio",
                r.amplitude_ratio
                    .map_or(serde_json::Value::Null, Into::into),
            );
            for (name, amps, err) in [
                ("analytic", r.analytic, 0.0),
                ("linear", r.linear, r.linear_error),
                (
                    "nonlinear",
                    r.nonlinear.unwrap_or(nan),
                    r.nonlinear_error.unwrap_or(f64::NAN),
                ),
            ] {
                let mut row = vec![Cell::Text(name.into())];
                row.extend(amplitude_cells(&amps));
                row.push(Cell::Num(err));
                t.push(row);
            }
            Ok(styled(t, Format::Json, &[]))
        }
    }
}
