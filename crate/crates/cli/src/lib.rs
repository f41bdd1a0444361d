//! Library half of the `qudit-bell` command-line tool.
//!
//! Every subcommand produces a [`RunReport`] that `main` prints as JSON. Failures carry
//! the process exit code: 1 for a failed `verify`, 2 for unsupported input, 3 when no
//! violation exists, 4 for I/O errors.

pub mod figure;
pub mod golden;
pub mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qudit_bell::lhv::{brute_force_bounds, BRUTE_FORCE_MAX_D};
use qudit_bell::optimizer::{route_sweep, triangle_grid, OptimizerConfig, Route, DEFAULT_SEED};
use qudit_bell::quantum::{expectation_closed_form, noise_threshold, paper_expectation};
use qudit_bell::{analytic_bounds, Error, PrimeDim};

pub use figure::{Figure, FigureData, Format};
pub use report::{RunReport, Witnesses};

#[derive(Debug, Parser)]
#[command(
    name = "qudit-bell",
    version,
    about = "Bell-inequality analysis for pairs of prime-dimensional qudits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical (local hidden variable) bounds of the Bell function.
    Classical {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Method::Analytic)]
        method: Method,
    },
    /// Quantum value of the violating state and settings, with the violation ratio.
    Quantum {
        #[arg(long)]
        d: u32,
    },
    /// Minimal weight of the entangled state in a white-noise mixture that still violates.
    Noise {
        #[arg(long)]
        d: u32,
    },
    /// Writes optimized-value data over the qutrit Schmidt triangle or along a route.
    Figure {
        #[arg(value_enum)]
        which: Figure,
        /// Lattice subdivisions (fig1) or route steps (fig2); defaults 40 and 50.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Recomputes the golden numbers and prints a pass/fail table.
    Verify {
        #[command(flatten)]
        optimizer: OptimizerArgs,
        /// Offset added to one expected value; used to exercise the failure path.
        #[arg(
            long,
            hide = true,
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        perturb: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Analytic,
}

#[derive(Clone, Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Report to print despite the failure (a failed `verify` still shows its table).
    pub report: Option<Box<RunReport>>,
}

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_UNSUPPORTED: u8 = 2;
pub const EXIT_NO_VIOLATION: u8 = 3;
pub const EXIT_IO: u8 = 4;

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoViolation { d, quantum, classical } => CliError::new(
                EXIT_NO_VIOLATION,
                format!(
                    "no violation for d = {d} (quantum {quantum:.6} <= classical {classical:.6}); threshold undefined"
                ),
            ),
            other => CliError::new(EXIT_UNSUPPORTED, other.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Classical { d, method } => classical(*d, *method)?,
        Command::Quantum { d } => quantum(*d)?,
        Command::Noise { d } => noise(*d)?,
        Command::Figure {
            which,
            resolution,
            out,
            format,
            optimizer,
        } => figure(*which, *resolution, out, *format, optimizer)?,
        Command::Verify { optimizer, perturb } => verify(optimizer, *perturb)?,
    };
    report.timing_ms = start.elapsed().as_millis() as u64;
    if report.checks.iter().any(|r| !r.pass) {
        let failed = report.checks.iter().filter(|r| !r.pass).count();
        return Err(CliError {
            code: EXIT_VERIFY_FAILED,
            message: format!("{failed} golden check(s) failed"),
            report: Some(Box::new(report)),
        });
    }
    Ok(report)
}

fn classical(d: u32, method: Method) -> Result<RunReport, CliError> {
    let pd = PrimeDim::new(d)?;
    let mut report = RunReport::new("classical", Some(d));
    report.input("method", format!("{method:?}").to_lowercase());
    match method {
        Method::Analytic => {
            let b = analytic_bounds(pd);
            report.set_bounds(b.min_f64(), b.max_f64());
        }
        Method::Brute => {
            if d > BRUTE_FORCE_MAX_D {
                return Err(CliError::new(
                    EXIT_UNSUPPORTED,
                    format!(
                        "exhaustive search is limited to d <= {BRUTE_FORCE_MAX_D} ({d}^{} assignments); use --method analytic",
                        2 * d - 1
                    ),
                ));
            }
            let res = brute_force_bounds(pd)?;
            report.set_bounds(res.bounds.min_f64(), res.bounds.max_f64());
            report.result("assignments_checked", res.assignments_checked as f64);
            report.witnesses = Some(Witnesses {
                argmin: report::Assignment {
                    a: res.argmin.alice().to_vec(),
                    b: res.argmin.bob().to_vec(),
                },
                argmax: report::Assignment {
                    a: res.argmax.alice().to_vec(),
                    b: res.argmax.bob().to_vec(),
                },
            });
        }
    }
    if let Some([min, max]) = report.classical_bounds {
        report.result("min", min);
        report.result("max", max);
    }
    Ok(report)
}

fn quantum(d: u32) -> Result<RunReport, CliError> {
    let pd = PrimeDim::new(d)?;
    let mut report = RunReport::new("quantum", Some(d));
    let bounds = analytic_bounds(pd);
    report.set_bounds(bounds.min_f64(), bounds.max_f64());
    let q = paper_expectation(pd)?;
    report.result("quantum_value", q);
    if d >= 5 {
        report.result("closed_form", expectation_closed_form(pd)?);
    }
    report.result("ratio", q / bounds.max_f64());
    report.violated = report.recompute_violated();
    Ok(report)
}

fn noise(d: u32) -> Result<RunReport, CliError> {
    let pd = PrimeDim::new(d)?;
    let t = noise_threshold(pd)?;
    let mut report = RunReport::new("noise", Some(d));
    let bounds = analytic_bounds(pd);
    report.set_bounds(bounds.min_f64(), bounds.max_f64());
    report.result("quantum_value", t.quantum);
    report.result("p_min", t.closed_form);
    report.result("p_min_bisection", t.bisection);
    report.result("agreement", t.agreement());
    report.violated = report.recompute_violated();
    Ok(report)
}

/// Computes the rows of a figure without writing them.
pub fn figure_data(
    which: Figure,
    resolution: usize,
    cfg: &OptimizerConfig,
) -> Result<FigureData, CliError> {
    let rows: Vec<Vec<f64>> = match which {
        Figure::Fig1 => triangle_grid(resolution, cfg)?
            .into_iter()
            .map(|p| vec![p.squares[0], p.squares[1], p.squares[2], p.value])
            .collect(),
        Figure::Fig2R1 | Figure::Fig2R2 => {
            let route = if which == Figure::Fig2R1 {
                Route::R1
            } else {
                Route::R2
            };
            route_sweep(route, resolution, cfg)?
                .into_iter()
                .map(|p| vec![p.entropy, p.value])
                .collect()
        }
    };
    Ok(FigureData::new(
        which,
        resolution,
        cfg.restarts,
        cfg.seed,
        rows,
    ))
}

fn figure(
    which: Figure,
    resolution: Option<usize>,
    out: &PathBuf,
    format: Format,
    optimizer: &OptimizerArgs,
) -> Result<RunReport, CliError> {
    let resolution = resolution.unwrap_or(which.default_resolution());
    let cfg = optimizer.config();
    cfg.validate()?;
    let io_error =
        |e: std::io::Error| CliError::new(EXIT_IO, format!("cannot write {}: {e}", out.display()));
    // Open first so an unwritable path fails before the optimization runs.
    let file = File::create(out).map_err(io_error)?;
    let data = figure_data(which, resolution, &cfg)?;
    let mut writer = BufWriter::new(file);
    data.write(format, &mut writer).map_err(io_error)?;
    writer.flush().map_err(io_error)?;

    let mut report = RunReport::new("figure", Some(3));
    report.input("figure", which.name());
    report.input("resolution", resolution);
    report.input("format", format!("{format:?}").to_lowercase());
    report.input("out", out.display().to_string());
    report.input("restarts", cfg.restarts);
    report.input("seed", cfg.seed);
    let bounds = analytic_bounds(PrimeDim::new(3)?);
    report.set_bounds(bounds.min_f64(), bounds.max_f64());
    let best = data
        .rows
        .iter()
        .map(|r| *r.last().expect("non-empty row"))
        .fold(f64::NEG_INFINITY, f64::max);
    report.result("rows", data.rows.len() as f64);
    report.result("quantum_value", best);
    report.violated = report.recompute_violated();
    Ok(report)
}

fn verify(optimizer: &OptimizerArgs, perturb: f64) -> Result<RunReport, CliError> {
    let cfg = optimizer.config();
    cfg.validate()?;
    let rows = golden::golden_table(&cfg, perturb)?;
    let mut report = RunReport::new("verify", None);
    report.input("restarts", cfg.restarts);
    report.input("seed", cfg.seed);
    let passed = rows.iter().filter(|r| r.pass).count();
    report.result("passed", passed as f64);
    report.result("failed", (rows.len() - passed) as f64);
    report.checks = rows
        .into_iter()
        .map(|mut r| {
            r.value = report::round12(r.value);
            r.expected = report::round12(r.expected);
            r
        })
        .collect();
    Ok(report)
}

/// Human-readable verify table.
pub fn format_table(report: &RunReport) -> String {
    let width = report
        .checks
        .iter()
        .map(|r| r.name.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for r in &report.checks {
        let pad = width - r.name.chars().count();
        out.push_str(&format!(
            "{}  {}{}  {:>16}  expected {} ± {:e}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            " ".repeat(pad),
            short(r.value),
            r.expected,
            r.tolerance
        ));
    }
    out
}

fn short(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:.3e}")
    } else {
        format!("{x}")
    }
}
