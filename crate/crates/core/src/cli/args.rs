use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::network::Scenario;

pub(crate) const AFTER_HELP: &str = "\
Squeezing may be given as r (natural units) or in dB, never both:
  dB = 10·log10(e^{2r}) = 8.685889638·r

Modes are numbered from 1. Exit codes: 0 success, 2 usage error,
3 numerically degenerate measurement encountered.";

#[derive(Parser, Debug)]
#[command(
    name = "cvnet",
    version,
    about = "Continuous-variable GHZ-state teleportation networks",
    after_help = AFTER_HELP
)]
pub struct Cli {
    /// Evaluate grids and trials on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the N-party resource state and print its moments and correlations.
    State(StateArgs),
    /// Optimal-fidelity curves over a squeezing grid in dB.
    Curve(CurveArgs),
    /// Run the teleportation protocol with sampled measurement outcomes.
    Teleport(TeleportArgs),
    /// Find where the equal-squeezing optimal fidelity turns classical.
    Scan(ScanArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioArg {
    AllEqual,
    OneSqueezed,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::AllEqual => Scenario::AllEqual,
            ScenarioArg::OneSqueezed => Scenario::OneSqueezed,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Squeezing {
    #[arg(long, value_enum, default_value_t = ScenarioArg::AllEqual)]
    pub scenario: ScenarioArg,
    /// Squeezing parameter of every input (all-equal) or of mode 1 (one-squeezed).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["r1", "db"])]
    pub r: Option<f64>,
    /// Squeezing of mode 1 in the one-squeezed scenario.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "db")]
    pub r1: Option<f64>,
    /// Squeezing in dB instead of r.
    #[arg(long, allow_hyphen_values = true)]
    pub db: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct StateArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub squeezing: Squeezing,
    /// Pair used for the momentum correlation and distillation diagnostics.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Assisting gain for the diagnostics (default: closed-form optimum).
    #[arg(long, allow_hyphen_values = true)]
    pub gain: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct CurveArgs {
    /// Comma-separated party counts.
    #[arg(long, default_value = "2,3,4,8,20,50")]
    pub ns: String,
    #[arg(long, value_enum, default_value_t = ScenarioArg::AllEqual)]
    pub scenario: ScenarioArg,
    #[arg(long, default_value_t = 0.0)]
    pub db_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub db_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub db_step: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct TeleportArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub squeezing: Squeezing,
    /// Sender mode.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Receiver mode.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// `optimal`, `g,gN`, or `g,g_1,...,g_{N-2}` for per-station gains.
    #[arg(long, default_value = "optimal", allow_hyphen_values = true)]
    pub gains: String,
    /// Coherent input amplitude as `x,p`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Root seed; a fresh one is generated and reported when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    /// Single party count (instead of a range).
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 25)]
    pub n_min: usize,
    #[arg(long, default_value_t = 32)]
    pub n_max: usize,
    #[arg(long, default_value_t = 6.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub r_step: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}
