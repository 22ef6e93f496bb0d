//! Batch front end: parses spec files, runs the validate → build → solve pipeline and
//! writes machine-readable reports.
//!
//! Exit codes: 0 success, 2 validation or parse failure, 3 resonance, 4 spectral tail
//! bound, 5 fiber mean or fiber constancy, 64 usage and I/O.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::ReportOutput;
use crate::config::{Format, RunConfig};
use crate::error::{CliError, EXIT_USAGE};
use crate::report::{to_json, to_kv, RunReport, Status};

#[derive(Debug, Parser)]
#[command(name = "nilrigid", version, about = "Cocycle rigidity solver for lattice actions on nilmanifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra, lattice and cocycle sections without solving.
    Validate(RunArgs),
    /// Lower central series of the algebra.
    Series(RunArgs),
    /// Lie algebra cohomology H^0..H^2 and the H^1 basis.
    Cohomology(RunArgs),
    /// Build the lattice pair and its Diophantine certificates.
    LatticeBuild(RunArgs),
    /// Split the cocycle into a homomorphism plus a coboundary.
    Solve(RunArgs),
    /// Merge run directories into a convergence table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Spec files (TOML); sections are merged across files.
    #[arg(required = true)]
    pub specs: Vec<PathBuf>,
    /// Grid resolution per coordinate, e.g. 64,32,32.
    #[arg(long, value_delimiter = ',')]
    pub resolution: Option<Vec<usize>>,
    /// Fourier cutoff K for the fiber solves.
    #[arg(long = "modes", short = 'K')]
    pub modes: Option<usize>,
    /// Spectral tail tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fiber-constancy tolerance when descending.
    #[arg(long)]
    pub fiber_tol: Option<f64>,
    /// Worker threads for the parallel regions.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Bits of precision for certificate spot checks.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Output directory for report files and grid dumps.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Check the cocycle identity on the commutator relations before solving.
    #[arg(long)]
    pub check_identity: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run directories (each holding report.json, or subdirectories that do).
    #[arg(required = true)]
    pub dirs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            specs: a.specs,
            resolution: a.resolution,
            modes: a.modes,
            tol: a.tol,
            fiber_tol: a.fiber_tol,
            threads: a.threads,
            precision: a.precision,
            out: a.out,
            format: a.format,
            check_identity: a.check_identity,
        }
    }
}

/// What a command printed and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn render<T: serde::Serialize>(value: &T, format: Format) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Kv => to_kv(value),
    }
}

fn failure(e: &CliError) -> Status {
    Status {
        exit_code: e.exit_code(),
        code: e.code().into(),
        stage: Some(e.stage().into()),
        level: e.level(),
        message: Some(e.to_string()),
    }
}

/// Runs a pipeline verb; the report is written (with its failure status) even when the
/// pipeline fails.
pub fn run_pipeline(name: &str, config: &RunConfig) -> (RunReport, Option<CliError>) {
    let mut report = RunReport::new(name);
    let body = |report: &mut RunReport| match name {
        "validate" => commands::cmd_validate(config, report),
        "series" => commands::cmd_series(config, report),
        "cohomology" => commands::cmd_cohomology(config, report),
        "lattice-build" => commands::cmd_lattice_build(config, report),
        "solve" => commands::cmd_solve(config, report),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    };
    let result = match config.threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| body(&mut report)),
            Err(e) => Err(CliError::Config(format!("cannot start {n} threads: {e}"))),
        },
        _ => body(&mut report),
    };
    let mut err = result.err();
    if let Some(e) = &err {
        report.status = failure(e);
    }
    if let Some(dir) = &config.out {
        if let Err(e) = commands::write_report(dir, &report) {
            err.get_or_insert(e);
        }
    }
    (report, err)
}

pub fn execute(cli: Cli) -> Outcome {
    let (name, config) = match cli.command {
        Command::Validate(a) => ("validate", RunConfig::from(a)),
        Command::Series(a) => ("series", a.into()),
        Command::Cohomology(a) => ("cohomology", a.into()),
        Command::LatticeBuild(a) => ("lattice-build", a.into()),
        Command::Solve(a) => ("solve", a.into()),
        Command::Report(a) => return execute_report(a),
    };
    let (report, err) = run_pipeline(name, &config);
    let stdout = render(&report, config.format);
    match err {
        None => Outcome { exit_code: 0, stdout, stderr: String::new() },
        Some(e) => Outcome { exit_code: e.exit_code(), stdout, stderr: e.diagnostic() + "\n" },
    }
}

fn execute_report(a: ReportArgs) -> Outcome {
    let result = commands::cmd_report(&a.dirs).and_then(|out| {
        match &out {
            ReportOutput::Single(r) => {
                if let Some(dir) = &a.out {
                    commands::write_report(dir, r)?;
                }
            }
            ReportOutput::Merged(doc) => {
                if let Some(dir) = &a.out {
                    commands::write_consolidated(dir, doc)?;
                }
            }
        }
        Ok(out)
    });
    match result {
        Ok(ReportOutput::Single(r)) => Outcome { exit_code: 0, stdout: render(&*r, a.format), stderr: String::new() },
        Ok(ReportOutput::Merged(doc)) => Outcome { exit_code: 0, stdout: render(&doc, a.format), stderr: String::new() },
        Err(e) => Outcome { exit_code: e.exit_code(), stdout: String::new(), stderr: e.diagnostic() + "\n" },
    }
}

/// Parses arguments; clap's own errors become usage failures (exit 64).
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { exit_code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("{text}{}\n", CliError::Usage("invalid arguments".into()).diagnostic()),
                },
            }
        }
    }
}
