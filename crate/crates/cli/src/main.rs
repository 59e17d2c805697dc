//! `conegeo`: generate, classify, integrate, develop and verify geodesics on
//! cones from the command line.
//!
//! Exit status is 0 on success, 1 for invalid flags, configuration or input
//! files, and 2 when a computation fails. Failures are reported on stderr as
//! a JSON object with the error name; no output file is written unless the
//! whole command succeeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conegeo::GeomError;

mod commands;
mod config;

use config::{parse_tolerance, InvalidConfig};

#[derive(Debug, Parser)]
#[command(name = "conegeo", version, about = "Geodesics on cones: generation, classification and verification")]
struct Cli {
    /// JSON file with default values for the command's options.
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a rectifying geodesic of a cone to `s,x,y,z` CSV.
    Generate(GenerateArgs),
    /// Classify a sampled curve and fit its slant axis.
    Classify(ClassifyArgs),
    /// Integrate the geodesic equations from chart initial data.
    Integrate(IntegrateArgs),
    /// Unroll a curve on a cone into the plane (`s,px,py` CSV).
    Develop(DevelopArgs),
    /// Check whether a sampled curve is a geodesic of a cone.
    Verify(VerifyArgs),
    /// Cross-check the rectifying, slant-helix and geodesic characterizations
    /// on a circular cone.
    Crosscheck(CrosscheckArgs),
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    /// Number of sample points for the analysis.
    #[arg(long)]
    samples: Option<u64>,
    /// Tolerance override, e.g. `--tol clairaut=1e-4` (repeatable).
    #[arg(long = "tol", value_name = "KEY=VALUE", value_parser = parse_tolerance)]
    tol: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Half-angle of a circular cone.
    #[arg(long, conflicts_with = "base")]
    psi0: Option<f64>,
    /// Base curve CSV (`t,yx,yy,yz`) of a general cone.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Arc-length range; defaults to `-b/a ± 5/a`.
    #[arg(long, allow_hyphen_values = true)]
    s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s_max: Option<f64>,
    /// Number of rows written.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    /// Cone JSON, e.g. `{"kind": "circular", "psi0": 0.5}`.
    #[arg(long)]
    cone: Option<PathBuf>,
    /// Initial data JSON with `t0, u0, dt0, du0, length`.
    #[arg(long)]
    ivp: Option<PathBuf>,
    /// RK4 step in arc length.
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional JSON with step, renormalization and drift figures.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DevelopArgs {
    #[arg(long)]
    cone: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    cone: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long)]
    psi0: Option<f64>,
    /// Seed for the random test axis.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Debug)]
pub enum CliError {
    Config(InvalidConfig),
    Geom(GeomError),
}

impl From<InvalidConfig> for CliError {
    fn from(e: InvalidConfig) -> Self {
        CliError::Config(e)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Geom(e) if e.is_input_error() => 1,
            CliError::Geom(_) => 2,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Config(e) => serde_json::json!({
                "error": "InvalidConfig",
                "key": e.key,
                "message": e.to_string(),
            }),
            CliError::Geom(e) => serde_json::json!({
                "error": e.name(),
                "message": e.to_string(),
            }),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Generate(args) => commands::generate(config, args),
        Command::Classify(args) => commands::classify(config, args),
        Command::Integrate(args) => commands::integrate(config, args),
        Command::Develop(args) => commands::develop(config, args),
        Command::Verify(args) => commands::verify(config, args),
        Command::Crosscheck(args) => commands::crosscheck(config, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
