//! The `eps-lab` command line: equilibrium solving, comparative statics,
//! selection classification, hypothesis regressions and scatter figures.
//!
//! [`run`] does all the work so the binary stays a thin wrapper and tests can
//! drive commands in-process.

pub mod commands;
pub mod format;
pub mod report;
pub mod svg;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eps_core::dataset::{Gender, Hypothesis};

pub use report::{OutputFormat, RunReport};

pub const DATA_ENV: &str = "EPS_LAB_DATA";

#[derive(Debug, Parser)]
#[command(
    name = "eps-lab",
    version,
    about = "Migrant-labor contract model and wage regressions"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Leave the timestamp out of reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the subgame perfect equilibrium of the contract game.
    #[command(allow_negative_numbers = true)]
    Equilibrium(EquilibriumArgs),
    /// Analytic derivatives of the equilibrium premium.
    #[command(allow_negative_numbers = true)]
    Statics(StaticsArgs),
    /// Fit a hypothesis regression on the country panel.
    Regress(RegressArgs),
    /// Draw a labeled scatter plot with its fitted trendline.
    Scatter(ScatterArgs),
    /// Classify migrant self-selection for linear wage schedules.
    #[command(allow_negative_numbers = true)]
    Select(SelectArgs),
    /// Write the embedded country panel as CSV.
    ExportData(ExportArgs),
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    /// Skill relevance at home.
    #[arg(long)]
    pub s0: f64,
    /// Skill relevance in the host country.
    #[arg(long)]
    pub s1: f64,
    /// Home piece-rate wage.
    #[arg(long, default_value_t = 0.0)]
    pub w0: f64,
    /// Migration cost.
    #[arg(long = "M", default_value_t = 0.0)]
    pub m: f64,
    /// Cross-check against numerical backward induction.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct StaticsArgs {
    #[arg(long)]
    pub s0: f64,
    #[arg(long)]
    pub s1: f64,
    /// Compare with central finite differences of the solver.
    #[arg(long)]
    pub check_fd: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HypothesisArg {
    H1,
    H2,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::H1 => Hypothesis::H1,
            HypothesisArg::H2 => Hypothesis::H2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenderArg {
    Total,
    Men,
    Women,
    All,
}

impl GenderArg {
    pub fn genders(self) -> Vec<Gender> {
        match self {
            GenderArg::Total => vec![Gender::Total],
            GenderArg::Men => vec![Gender::Men],
            GenderArg::Women => vec![Gender::Women],
            GenderArg::All => Gender::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleGender {
    Total,
    Men,
    Women,
}

impl From<SingleGender> for Gender {
    fn from(g: SingleGender) -> Self {
        match g {
            SingleGender::Total => Gender::Total,
            SingleGender::Men => Gender::Men,
            SingleGender::Women => Gender::Women,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Country panel CSV; the embedded panel is used when absent.
    #[arg(long, env = DATA_ENV)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    #[arg(long, value_enum)]
    pub hypothesis: HypothesisArg,
    #[arg(long, value_enum, default_value_t = GenderArg::All)]
    pub gender: GenderArg,
    #[command(flatten)]
    pub data: DataArgs,
    /// Also write table rows, one JSON record per line, to this file.
    #[arg(long, value_name = "PATH")]
    pub emit_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long, value_enum)]
    pub hypothesis: HypothesisArg,
    #[arg(long, value_enum, default_value_t = SingleGender::Total)]
    pub gender: SingleGender,
    /// Plot log10 of the dependent variable (default).
    #[arg(long, conflicts_with = "raw")]
    pub log10: bool,
    /// Plot the dependent variable in its original units.
    #[arg(long)]
    pub raw: bool,
    /// SVG output path.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Point table path; defaults to the SVG path with a `.csv` extension.
    #[arg(long, value_name = "PATH")]
    pub sidecar: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub alpha0: f64,
    #[arg(long)]
    pub r0: f64,
    #[arg(long)]
    pub alpha1: f64,
    #[arg(long)]
    pub r1: f64,
    #[arg(long = "M", default_value_t = 0.0)]
    pub m: f64,
    /// Comma-separated skill levels for a migration-rate count.
    #[arg(long, value_delimiter = ',')]
    pub skills: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Destination file; CSV goes to stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// A failed command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs a parsed command line, writing the report to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let report = match &cli.command {
        Command::Equilibrium(a) => commands::equilibrium(a)?,
        Command::Statics(a) => commands::statics(a)?,
        Command::Regress(a) => commands::regress(a)?,
        Command::Scatter(a) => commands::scatter(a)?,
        Command::Select(a) => commands::select(a)?,
        Command::ExportData(a) => match commands::export_data(a, out)? {
            Some(r) => r,
            None => return Ok(()),
        },
    };
    let report = RunReport {
        timestamp: (!cli.no_timestamp).then(now_unix),
        ..report
    };
    report.write(out, cli.format)?;
    Ok(())
}
