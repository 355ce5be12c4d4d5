//! Validated run specifications, command execution and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use hopfion_core::energy::{energy_report, EnergyReport};
use hopfion_core::profile::Family;
use hopfion_core::topology::{hopf_index_numeric, hopf_report, HopfGrid, HopfReport, ORIENTATION};
use hopfion_core::verify::{
    boundary_check, default_samples, expected_k1, expected_k2, first_integral, ode_residual, residual_of_sample,
    residual_report, BoundaryCheck, FirstIntegralReport, ProfileSample, ResidualReport,
};
use hopfion_core::{Scale, SolitonConfig};
use serde::Serialize;

use crate::args::{Cli, Command, ConfigArgs, Format, OutputArgs};
use crate::error::{CliError, ErrorReport};
use crate::field::{field_table, sample_field, write_vtk};
use crate::figures::{check_figure, density_table, figure_table, profile_table, Figure, FigureCheck};
use crate::table::{Cell, Table};

/// Relative agreement required between numeric and boundary charges.
pub const HOPF_TOL: f64 = 0.02;
/// Absolute bound on the numeric charge of the neutral family.
pub const NEUTRAL_HOPF_ABS: f64 = 0.02;
pub const RESIDUAL_TOL: f64 = 1e-7;
pub const FIRST_INTEGRAL_TOL: f64 = 1e-8;
/// A 1% scaling of the profile must lift the residual above this.
pub const PERTURBATION_FLOOR: f64 = 1e-3;

const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Profile {
        config: Option<SolitonConfig>,
        figure: Option<Figure>,
        samples: usize,
        eta_max: f64,
    },
    Energy {
        config: Option<SolitonConfig>,
        figure: Option<Figure>,
        samples: usize,
        eta_max: f64,
        tol: f64,
        table: bool,
    },
    Hopf {
        config: SolitonConfig,
        grid: HopfGrid,
        tol: f64,
    },
    Verify {
        config: SolitonConfig,
        samples: usize,
        integral_samples: usize,
        eta_max: f64,
        window: f64,
        tol: f64,
    },
    Field {
        config: SolitonConfig,
        dims: [usize; 3],
        half_width: f64,
        eta_max: f64,
        max_points: usize,
    },
    Figures {
        samples: usize,
        eta_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub task: Task,
    pub format: Format,
    /// File for the main output; the figures directory for `figures`.
    pub out: Option<PathBuf>,
}

fn build_config(args: &ConfigArgs) -> Result<SolitonConfig, CliError> {
    let (Some(m), Some(n)) = (args.m, args.n) else {
        return Err(CliError::Usage("--m and --n are required".into()));
    };
    let family = match (args.charged, args.neutral) {
        (Some(l), None) => Family::Charged(l),
        (None, Some(k)) => Family::Neutral(k),
        _ => return Err(CliError::Usage("exactly one of --charged L or --neutral K is required".into())),
    };
    Ok(SolitonConfig::new(m, n, family, Scale::new(args.a)?)?)
}

fn figure_config(
    args: &ConfigArgs,
    figure: Option<u8>,
    allowed: [Figure; 2],
    command: &str,
) -> Result<(Option<SolitonConfig>, Option<Figure>), CliError> {
    match figure {
        None => Ok((Some(build_config(args)?), None)),
        Some(number) => {
            let fig = Figure::from_number(number).filter(|f| allowed.contains(f)).ok_or_else(|| {
                CliError::Usage(format!(
                    "`{command}` emits figures {} and {}",
                    allowed[0].number(),
                    allowed[1].number()
                ))
            })?;
            if args.m.is_some() || args.n.is_some() || args.charged.is_some() || args.neutral.is_some() {
                return Err(CliError::Usage("--figure fixes m = 2, n = 1 and the family".into()));
            }
            Ok((None, Some(fig)))
        }
    }
}

fn pick_format(output: &OutputArgs, default: Format, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let format = output.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else if format == Format::Vtk {
        Err(CliError::Usage("vtk output is only available for `field`".into()))
    } else {
        Err(CliError::Usage(format!("`{command}` does not write {format:?}").to_lowercase()))
    }
}

impl RunSpec {
    pub fn from_cli(cli: Cli) -> Result<RunSpec, CliError> {
        const TABLES: &[Format] = &[Format::Csv, Format::Json];
        let spec = match cli.command {
            Command::Profile(a) => {
                let (config, figure) = figure_config(
                    &a.config,
                    a.figure,
                    [Figure::ChargedProfile, Figure::NeutralProfile],
                    "profile",
                )?;
                RunSpec {
                    task: Task::Profile {
                        config,
                        figure,
                        samples: a.samples,
                        eta_max: a.eta_max,
                    },
                    format: pick_format(&a.output, Format::Csv, TABLES, "profile")?,
                    out: a.output.out,
                }
            }
            Command::Energy(a) => {
                let (config, figure) =
                    figure_config(&a.config, a.figure, [Figure::ChargedEnergy, Figure::NeutralEnergy], "energy")?;
                let default = if figure.is_some() { Format::Csv } else { Format::Json };
                RunSpec {
                    task: Task::Energy {
                        config,
                        figure,
                        samples: a.samples,
                        eta_max: a.eta_max,
                        tol: a.tol,
                        table: a.table,
                    },
                    format: pick_format(&a.output, default, TABLES, "energy")?,
                    out: a.output.out,
                }
            }
            Command::Hopf(a) => RunSpec {
                task: Task::Hopf {
                    config: build_config(&a.config)?,
                    grid: HopfGrid::new(a.grid.0, a.grid.1)?,
                    tol: a.tol,
                },
                format: pick_format(&a.output, Format::Json, TABLES, "hopf")?,
                out: a.output.out,
            },
            Command::Verify(a) => RunSpec {
                task: Task::Verify {
                    config: build_config(&a.config)?,
                    samples: a.samples,
                    integral_samples: a.integral_samples,
                    eta_max: a.eta_max,
                    window: a.window,
                    tol: a.tol,
                },
                format: pick_format(&a.output, Format::Json, TABLES, "verify")?,
                out: a.output.out,
            },
            Command::Field(a) => RunSpec {
                task: Task::Field {
                    config: build_config(&a.config)?,
                    dims: a.grid,
                    half_width: a.half_width,
                    eta_max: a.eta_max,
                    max_points: a.max_points,
                },
                format: pick_format(&a.output, Format::Vtk, &[Format::Vtk, Format::Csv], "field")?,
                out: a.output.out,
            },
            Command::Figures(a) => RunSpec {
                task: Task::Figures {
                    samples: a.samples,
                    eta_max: a.eta_max,
                },
                format: Format::Csv,
                out: Some(a.out),
            },
        };
        Ok(spec)
    }
}

/// Result of one command: the bytes for `--out`/stdout, files written on
/// the side, and tolerance failures (empty when everything passed).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub body: Vec<u8>,
    pub written: Vec<PathBuf>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn config_cells(cfg: &SolitonConfig) -> Vec<(&'static str, Cell)> {
    let (family, index) = match cfg.family() {
        Family::Charged(l) => ("charged", l),
        Family::Neutral(k) => ("neutral", k),
    };
    vec![
        ("m", Cell::Int(i64::from(cfg.m()))),
        ("n", Cell::Int(i64::from(cfg.n()))),
        ("family", Cell::Text(family.into())),
        ("index", Cell::Int(i64::from(index))),
        ("a", Cell::Num(cfg.scale().get())),
    ]
}

fn single_row(cfg: &SolitonConfig, values: Vec<(&'static str, Cell)>) -> Table {
    let mut cells = config_cells(cfg);
    cells.extend(values);
    let mut t = Table::new(cells.iter().map(|(k, _)| *k));
    t.push(cells.into_iter().map(|(_, v)| v).collect());
    t
}

fn encode<T: Serialize>(format: Format, json: &T, csv: impl FnOnce() -> Result<Table, CliError>) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(json)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => Ok(csv()?.to_csv_string()?.into_bytes()),
        Format::Vtk => Err(CliError::Usage("vtk output is only available for `field`".into())),
    }
}

fn encode_table(format: Format, table: &Table) -> Result<Vec<u8>, CliError> {
    encode(format, table, || Ok(table.clone()))
}

#[derive(Debug, Serialize)]
pub struct EnergyOutput {
    pub report: EnergyReport,
    pub tolerance: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<Table>,
}

#[derive(Debug, Serialize)]
pub struct HopfOutput {
    #[serde(flatten)]
    pub report: HopfReport,
    pub q_numeric_coarse: f64,
    pub q_numeric_extrapolated: f64,
    pub orientation: f64,
    pub tolerance: f64,
    pub consistent: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub residual: ResidualReport,
    pub residual_tolerance: f64,
    pub first_integral: FirstIntegralReport,
    pub first_integral_tolerance: f64,
    pub expected_k1: f64,
    pub expected_k2: f64,
    pub boundary: BoundaryCheck,
    /// Residual of the profile scaled by 1.01 at `eta_probe`.
    pub perturbed_residual: f64,
    pub eta_probe: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct FiguresOutput {
    pub directory: String,
    pub files: Vec<String>,
    pub checks: Vec<FigureCheck>,
    pub passed: bool,
}

pub fn verify_config(
    cfg: &SolitonConfig,
    samples: usize,
    integral_samples: usize,
    eta_max: f64,
    window: f64,
    tol: f64,
) -> Result<VerifyOutput, CliError> {
    let residual = residual_report(cfg, samples, eta_max, window)?;
    let points = default_samples(cfg, integral_samples, eta_max, window)?;
    let fi = first_integral(cfg, &points)?;
    let boundary = boundary_check(cfg, eta_max);
    // probe at eta = 1 unless that sits in a window, else the first sample
    let eta_probe = if ode_residual(1.0, cfg, window).is_ok() { 1.0 } else { points[0] };
    let sample = ProfileSample::exact(&cfg.phase(), eta_probe)
        .ok_or(hopfion_core::Error::Domain("probe sits on a pole"))?
        .scaled(1.01);
    let perturbed_residual = residual_of_sample(
        eta_probe,
        f64::from(cfg.m().unsigned_abs()),
        f64::from(cfg.n().unsigned_abs()),
        &sample,
    );
    let passed = residual.max_abs_residual < tol
        && fi.is_constant(FIRST_INTEGRAL_TOL)
        && boundary.passed
        && perturbed_residual.abs() > PERTURBATION_FLOOR;
    Ok(VerifyOutput {
        residual,
        residual_tolerance: tol,
        first_integral: fi,
        first_integral_tolerance: FIRST_INTEGRAL_TOL,
        expected_k1: expected_k1(cfg),
        expected_k2: expected_k2(cfg),
        boundary,
        perturbed_residual,
        eta_probe,
        passed,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the four figure datasets into `dir` and checks them.
pub fn write_figures(dir: &Path, samples: usize, eta_max: f64) -> Result<FiguresOutput, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    let mut checks = Vec::new();
    for figure in Figure::ALL {
        let table = figure_table(figure, samples, eta_max)?;
        let path = dir.join(figure.file_name());
        write_file(&path, table.to_csv_string()?.as_bytes())?;
        files.push(path.display().to_string());
        checks.push(check_figure(figure, &table)?);
    }
    Ok(FiguresOutput {
        directory: dir.display().to_string(),
        passed: checks.iter().all(|c| c.passed),
        files,
        checks,
    })
}

pub fn execute(spec: &RunSpec) -> Result<Outcome, CliError> {
    let mut outcome = Outcome::default();
    match &spec.task {
        Task::Profile {
            config,
            figure,
            samples,
            eta_max,
        } => {
            let table = match (config, figure) {
                (_, Some(fig)) => figure_table(*fig, *samples, *eta_max)?,
                (Some(cfg), None) => profile_table(cfg, *samples, *eta_max)?,
                (None, None) => unreachable!("validated in RunSpec::from_cli"),
            };
            outcome.body = encode_table(spec.format, &table)?;
        }
        Task::Energy {
            config,
            figure,
            samples,
            eta_max,
            tol,
            table,
        } => match (config, figure) {
            (_, Some(fig)) => {
                outcome.body = encode_table(spec.format, &figure_table(*fig, *samples, *eta_max)?)?;
            }
            (Some(cfg), None) => {
                let report = energy_report(cfg, *tol)?;
                let converged = report.abs_error_estimate <= tol * report.quadrature;
                if !converged {
                    outcome.failures.push(format!(
                        "quadrature error estimate {} exceeds {} relative",
                        report.abs_error_estimate, tol
                    ));
                }
                let density = if *table { Some(density_table(cfg, *samples, *eta_max)?) } else { None };
                let json = EnergyOutput {
                    report,
                    tolerance: *tol,
                    converged,
                    density,
                };
                outcome.body = encode(spec.format, &json, || {
                    Ok(match &json.density {
                        Some(t) => t.clone(),
                        None => single_row(
                            cfg,
                            vec![
                                ("closed_form", Cell::Num(report.closed_form)),
                                ("quadrature", Cell::Num(report.quadrature)),
                                ("ratio", Cell::Num(report.ratio.unwrap_or(f64::NAN))),
                                ("abs_error_estimate", Cell::Num(report.abs_error_estimate)),
                            ],
                        ),
                    })
                })?;
            }
            (None, None) => unreachable!("validated in RunSpec::from_cli"),
        },
        Task::Hopf { config, grid, tol } => {
            let report = hopf_report(config, *grid)?;
            let numeric = hopf_index_numeric(config, *grid)?;
            let consistent = report.is_consistent(*tol, NEUTRAL_HOPF_ABS);
            if !consistent {
                outcome.failures.push(format!(
                    "numeric charge {} disagrees with boundary charge {}",
                    report.q_numeric, report.q_boundary
                ));
            }
            let json = HopfOutput {
                report,
                q_numeric_coarse: numeric.coarse_value,
                q_numeric_extrapolated: numeric.extrapolated,
                orientation: ORIENTATION,
                tolerance: *tol,
                consistent,
            };
            outcome.body = encode(spec.format, &json, || {
                let per = json
                    .report
                    .per_soliton
                    .iter()
                    .map(|q| format!("{q}"))
                    .collect::<Vec<_>>()
                    .join(";");
                Ok(single_row(
                    config,
                    vec![
                        ("grid_eta", Cell::Int(grid.n_eta as i64)),
                        ("grid_xi", Cell::Int(grid.n_xi as i64)),
                        ("q_numeric", Cell::Num(json.report.q_numeric)),
                        ("q_numeric_error", Cell::Num(json.report.q_numeric_error)),
                        ("q_boundary", Cell::Num(json.report.q_boundary)),
                        ("per_soliton", Cell::Text(per)),
                        ("consistent", Cell::Text(consistent.to_string())),
                    ],
                ))
            })?;
        }
        Task::Verify {
            config,
            samples,
            integral_samples,
            eta_max,
            window,
            tol,
        } => {
            let v = verify_config(config, *samples, *integral_samples, *eta_max, *window, *tol)?;
            if !v.passed {
                outcome.failures.push(format!(
                    "verification failed: residual {}, k1 spread {}, boundary {}, perturbed residual {}",
                    v.residual.max_abs_residual,
                    v.first_integral.relative_spread(),
                    v.boundary.passed,
                    v.perturbed_residual
                ));
            }
            outcome.body = encode(spec.format, &v, || {
                Ok(single_row(
                    config,
                    vec![
                        ("max_abs_residual", Cell::Num(v.residual.max_abs_residual)),
                        ("residual_points", Cell::Int(v.residual.eta_grid.len() as i64)),
                        ("k1", Cell::Num(v.first_integral.k1)),
                        ("k1_stddev", Cell::Num(v.first_integral.k1_stddev)),
                        ("k1_expected", Cell::Num(v.expected_k1)),
                        ("k2", Cell::Num(v.first_integral.k2)),
                        ("k2_expected", Cell::Num(v.expected_k2)),
                        ("perturbed_residual", Cell::Num(v.perturbed_residual)),
                        ("n3_at_origin", Cell::Num(v.boundary.n3_at_origin)),
                        ("n3_at_eta_max", Cell::Num(v.boundary.n3_at_eta_max)),
                        ("passed", Cell::Text(v.passed.to_string())),
                    ],
                ))
            })?;
        }
        Task::Field {
            config,
            dims,
            half_width,
            eta_max,
            max_points,
        } => {
            let grid = sample_field(config, *half_width, *dims, *eta_max, *max_points)?;
            if !grid.is_finite() {
                outcome.failures.push("field samples contain non-finite values".into());
            }
            outcome.body = match spec.format {
                Format::Vtk => {
                    let mut buf = Vec::new();
                    write_vtk(&grid, &mut buf)?;
                    buf
                }
                _ => field_table(&grid).to_csv_string()?.into_bytes(),
            };
        }
        Task::Figures { samples, eta_max } => {
            let dir = spec.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let out = write_figures(&dir, *samples, *eta_max)?;
            for check in out.checks.iter().filter(|c| !c.passed) {
                outcome.failures.push(format!("figure {} failed its shape checks", check.figure));
            }
            outcome.written = out.files.iter().map(PathBuf::from).collect();
            let mut body = serde_json::to_vec_pretty(&out)?;
            body.push(b'\n');
            outcome.body = body;
        }
    }
    Ok(outcome)
}

fn report_error(stderr: &mut dyn Write, kind: &str, message: String, code: i32) -> i32 {
    let body = ErrorReport::new(kind, message, code);
    let _ = writeln!(stderr, "{}", serde_json::to_string(&body).expect("error report serializes"));
    code
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 on success, 1 on runtime errors, 2 on usage errors, 3 when a result
/// misses its tolerance. Every nonzero exit prints one JSON object on
/// stderr.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            return report_error(stderr, "usage", e.to_string(), 2);
        }
    };
    let result = RunSpec::from_cli(cli).and_then(|spec| {
        let outcome = execute(&spec)?;
        match (&spec.task, &spec.out) {
            (Task::Figures { .. }, _) | (_, None) => stdout.write_all(&outcome.body)?,
            (_, Some(path)) => write_file(path, &outcome.body)?,
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) if outcome.passed() => 0,
        Ok(outcome) => report_error(stderr, "tolerance", outcome.failures.join("; "), EXIT_TOLERANCE),
        Err(e) => report_error(stderr, e.kind(), e.to_string(), e.exit_code()),
    }
}
