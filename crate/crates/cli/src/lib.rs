//! Command-line front end: argument definitions and subcommand drivers.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 geometric precondition violation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use abphase_core::fields::{
    grid_csv, linspace, sources_csv, Lattice, RectSources, RhombusSources, SourceModel,
    ToroidalSources,
};
use abphase_core::gauge_transform::{
    numeric_coulomb_transform, solve_lambda, BoundarySource, LambdaGridSpec, Method, SolverOptions,
};
use abphase_core::gauges::{
    figure_f_csv, figure_f_rows, RectCoulombGauge, RectTemporalGauge, RhombusTemporalGauge,
    ToroidalTemporalGauge,
};
use abphase_core::model::parse_config;
use abphase_core::oracles::{report_csv, report_text, run_suite, SuiteOptions};
use abphase_core::phase::{classify_path, loop_phase, QuadratureSpec};
use abphase_core::{
    ConfigError, FieldError, GaugeError, PathError, PhaseBreakdown, PhaseError, PolyPath,
    PotentialField, Setup,
};

#[derive(Debug, Parser)]
#[command(
    name = "abphase",
    version,
    about = "Electric and magnetic Aharonov-Bohm phases of a non-radiating capacitor-fluxon setup"
)]
pub struct Cli {
    /// Configuration file (JSON object with keys L, T, v, R_tor, eps_x,
    /// eps_y, eps_t, core_radius; missing keys take lab defaults).
    #[arg(long, global = true, env = "ABPHASE_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Loop phase of a closed path: theta_e, theta_m, theta_total, quad_error.
    Phase(PhaseArgs),
    /// Fields and sources on a lattice: t,x,y,Ex,Ey,Bz,rho,jx,jy.
    Fields(GridArgs),
    /// Charge density and capacitor/solenoid currents on a lattice:
    /// t,x,y,rho,jcx,jcy,jsx,jsy.
    Sources(SourcesArgs),
    /// Solve for the Coulomb gauge function on a grid: x,y,lambda, plus a
    /// solver report.
    Gauge(GaugeArgs),
    /// Samples of F(x, y) as a function of y for several x: x,y,F.
    #[command(name = "figure-f")]
    FigureF(FigureArgs),
    /// Run the verification suite; exit 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeChoice {
    Temporal,
    Coulomb,
    /// Coulomb gauge reached by a numerical Poisson solve.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Path file: one `t x y` vertex per line, `closed` to close the loop.
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = GaugeChoice::Temporal)]
    pub gauge: GaugeChoice,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Grid points per side for the numeric gauge.
    #[arg(long, default_value_t = 257)]
    pub grid: usize,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Rect,
    Rhombus,
    /// Columns x, y hold r, z.
    Toroidal,
}

/// Sampling axis `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got `{s}`"));
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|e| format!("bad sample count: {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) || n == 0 || (n > 1 && !(lo < hi)) {
        return Err(format!("invalid axis `{s}`"));
    }
    Ok(Axis { lo, hi, n })
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_enum, default_value_t = ModelChoice::Rect)]
    pub model: ModelChoice,
    /// Time axis `lo:hi:n`. Give all three axes or none; with none the
    /// model's feature-clustered lattice is used.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub t: Option<Axis>,
    /// First spatial axis (x, or r for the toroidal model).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub x: Option<Axis>,
    /// Second spatial axis (y, or z for the toroidal model).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub y: Option<Axis>,
}

#[derive(Debug, Args)]
pub struct SourcesArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Omit the solenoid current (rectangular model only).
    #[arg(long)]
    pub drop_solenoids: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryChoice {
    Analytic,
    Greens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Sor,
    Multigrid,
}

#[derive(Debug, Args)]
pub struct GaugeArgs {
    /// Grid points per side.
    #[arg(long, default_value_t = 257)]
    pub n: usize,
    /// Source of the Dirichlet boundary values.
    #[arg(long, value_enum, default_value_t = BoundaryChoice::Analytic)]
    pub boundary: BoundaryChoice,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    /// Stopping tolerance on the relative max residual.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_sweeps: usize,
    /// Solver report file; standard error when absent.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Include the wall time in the solver report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Comma-separated x values; defaults to -L/2, 0, L/4, L/2, L, 3L/2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x_values: Option<Vec<f64>>,
    /// Range of y as `lo:hi`; defaults to -2L:2L.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub y_range: Option<(f64, f64)>,
    /// Samples per x value.
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed of the random loop battery.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of random loops (at least 10).
    #[arg(long, default_value_t = 12)]
    pub loops: usize,
    /// Grid points per side of the gauge solve.
    #[arg(long, default_value_t = 257)]
    pub grid: usize,
    /// Negative control: drop the solenoid current.
    #[arg(long)]
    pub drop_solenoids: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Geometry(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Geometry(_) => 3,
        }
    }
}

impl From<PhaseError> for CliError {
    fn from(e: PhaseError) -> Self {
        match e {
            PhaseError::NotClosed | PhaseError::Path(_) => CliError::Usage(e.to_string()),
            _ => CliError::Geometry(e.to_string()),
        }
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<GaugeError> for CliError {
    fn from(e: GaugeError) -> Self {
        match e {
            GaugeError::Field(f) => f.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_to(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Configuration from `--config` (or the environment), lab defaults
/// otherwise.
pub fn load_setup(config: Option<&Path>) -> Result<Setup, CliError> {
    match config {
        Some(p) => Ok(parse_config(&read(p)?)?),
        None => Ok(Setup::default()),
    }
}

/// Run one invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // Fails only if a pool already exists, which then stays in use.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let setup = load_setup(cli.config.as_deref())?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Phase(a) => cmd_phase(&setup, a, out),
        Command::Fields(a) => {
            let model = source_model(&setup, a.model, false)?;
            write_to(out, &grid_csv(model.as_ref(), &lattice(model.as_ref(), a)?))
        }
        Command::Sources(a) => {
            if a.drop_solenoids && a.grid.model != ModelChoice::Rect {
                return Err(CliError::Usage(
                    "--drop-solenoids applies to the rect model only".into(),
                ));
            }
            let model = source_model(&setup, a.grid.model, a.drop_solenoids)?;
            write_to(
                out,
                &sources_csv(model.as_ref(), &lattice(model.as_ref(), &a.grid)?),
            )
        }
        Command::Gauge(a) => cmd_gauge(&setup, a, out),
        Command::FigureF(a) => {
            let l = setup.length();
            let xs = a
                .x_values
                .clone()
                .unwrap_or_else(|| vec![-0.5 * l, 0.0, 0.25 * l, 0.5 * l, l, 1.5 * l]);
            let y = a.y_range.unwrap_or((-2.0 * l, 2.0 * l));
            let rows = figure_f_rows(l, &xs, y, a.samples)?;
            write_to(out, &figure_f_csv(&rows))
        }
        Command::Verify(a) => cmd_verify(&setup, a, out),
    }
}

fn source_model(
    setup: &Setup,
    choice: ModelChoice,
    drop_solenoids: bool,
) -> Result<Box<dyn SourceModel>, CliError> {
    Ok(match choice {
        ModelChoice::Rect if drop_solenoids => Box::new(RectSources::without_solenoids(*setup)),
        ModelChoice::Rect => Box::new(RectSources::new(*setup)),
        ModelChoice::Rhombus => Box::new(RhombusSources::new(RhombusTemporalGauge::new(*setup)?)),
        ModelChoice::Toroidal => Box::new(ToroidalSources::new(ToroidalTemporalGauge::new(*setup))),
    })
}

fn lattice(model: &dyn SourceModel, a: &GridArgs) -> Result<Lattice, CliError> {
    match (a.t, a.x, a.y) {
        (None, None, None) => Ok(model.default_lattice()),
        (Some(t), Some(x), Some(y)) => {
            let axis = |v: Axis| linspace(v.lo, v.hi, v.n);
            Ok(Lattice::tensor(&axis(t), &axis(x), &axis(y)))
        }
        _ => Err(CliError::Usage("give all of --t, --x, --y or none".into())),
    }
}

fn cmd_phase(setup: &Setup, a: &PhaseArgs, out: Option<&Path>) -> Result<(), CliError> {
    let path = PolyPath::parse(&read(&a.path)?)?;
    if !path.is_closed() {
        return Err(PhaseError::NotClosed.into());
    }
    let spec = QuadratureSpec {
        rel_tol: a.rel_tol,
        abs_tol: a.abs_tol,
        ..QuadratureSpec::default()
    };
    if !spec.is_valid() {
        return Err(CliError::Usage(
            "quadrature tolerances must be positive".into(),
        ));
    }
    let field: Box<dyn PotentialField> = match a.gauge {
        GaugeChoice::Temporal => Box::new(RectTemporalGauge::new(*setup)),
        GaugeChoice::Coulomb => Box::new(RectCoulombGauge::new(*setup)),
        GaugeChoice::Numeric => {
            let spec = LambdaGridSpec::standard(setup, a.grid);
            let (lambda, _) = solve_lambda(setup, &spec, &SolverOptions::default())?;
            Box::new(numeric_coulomb_transform(
                Arc::new(RectTemporalGauge::new(*setup)),
                lambda,
                RectCoulombGauge::new(*setup).exclusions(),
            ))
        }
    };
    let phase = loop_phase(field.as_ref(), &path, &spec)?;
    let text = match a.format {
        Format::Csv => format!("{}\n{}\n", PhaseBreakdown::CSV_HEADER, phase.csv_row()),
        Format::Text => phase_text(setup, &path, field.as_ref(), &phase),
    };
    write_to(out, &text)
}

fn phase_text(
    setup: &Setup,
    path: &PolyPath,
    field: &dyn PotentialField,
    p: &PhaseBreakdown,
) -> String {
    let mut s = format!(
        "gauge: {}\ntheta_e: {}\ntheta_m: {}\ntheta_total: {}\nquad_error: {}\n",
        field.gauge(),
        p.theta_e,
        p.theta_m,
        p.theta_total,
        p.quad_error
    );
    if let Ok(c) = classify_path(path, setup) {
        s.push_str(&format!(
            "sheet crossings: {}\nwinding: {} {}\npredicted phase: {}\n",
            c.crossings, c.winding[0], c.winding[1], c.predicted_phase
        ));
    }
    s
}

fn cmd_gauge(setup: &Setup, a: &GaugeArgs, out: Option<&Path>) -> Result<(), CliError> {
    let mut spec = LambdaGridSpec::standard(setup, a.n);
    spec.boundary = match a.boundary {
        BoundaryChoice::Analytic => BoundarySource::Analytic,
        BoundaryChoice::Greens => BoundarySource::Greens,
    };
    let opts = SolverOptions {
        method: match a.method {
            MethodChoice::Auto => Method::Auto,
            MethodChoice::Sor => Method::Sor,
            MethodChoice::Multigrid => Method::Multigrid,
        },
        tol: a.tol,
        max_sweeps: a.max_sweeps,
    };
    let (lambda, report) = solve_lambda(setup, &spec, &opts)?;
    write_to(out, &lambda.to_csv())?;
    let text = report.to_text(a.timing);
    match &a.report {
        Some(p) => write_to(Some(p), &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(setup: &Setup, a: &VerifyArgs, out: Option<&Path>) -> Result<(), CliError> {
    let opts = SuiteOptions {
        seed: a.seed,
        loops: a.loops,
        drop_solenoids: a.drop_solenoids,
        grid: a.grid,
        ..SuiteOptions::default()
    };
    let reports = run_suite(setup, &opts);
    let text = match a.format {
        Format::Csv => report_csv(&reports),
        Format::Text => report_text(&reports),
    };
    write_to(out, &text)?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
