use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghz_twins::witness::I2Variant;
use ghz_twins::GhzLabel;

#[derive(Parser, Debug)]
#[command(
    name = "ghz-twins",
    version,
    about = "Four-qubit GHZ bases, entanglement criteria, mixture phase diagrams and simulated tomography"
)]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output path or prefix; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print basis states as kets or JSON.
    Basis(BasisArgs),
    /// Evaluate the witnesses on a state.
    Witness(WitnessArgs),
    /// Classify a grid over a two- or three-label simplex with white noise.
    PhaseDiagram(PhaseArgs),
    /// Prepare a state, count, and analyse.
    Simulate(SimulateArgs),
    /// Mix count records by weight, then analyse.
    MixCounts(MixArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Ket,
    Json,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    /// Four-bit label such as 0101.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    pub label: Option<GhzLabel>,
    /// All sixteen states plus the twin pairs.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = Format::Ket)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adapt {
    Auto,
    To(GhzLabel),
}

impl std::str::FromStr for Adapt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Adapt::Auto);
        }
        s.parse()
            .map(Adapt::To)
            .map_err(|e: ghz_twins::Error| e.to_string())
    }
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// JSON state file (pure `amps` or mixed `entries`).
    #[arg(required_unless_present = "label", conflicts_with = "label")]
    pub state_file: Option<PathBuf>,
    /// Use a basis state instead of a file.
    #[arg(long)]
    pub label: Option<GhzLabel>,
    /// Label to adapt to, or `auto` for the best adaptation.
    #[arg(long, default_value = "auto")]
    pub adapt: Adapt,
    #[arg(long, default_value = "normalized")]
    pub variant: I2Variant,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("labels").required(true).args(["pair", "triple"])))]
pub struct PhaseArgs {
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub pair: Option<Vec<GhzLabel>>,
    /// A twin pair followed by a third label.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
    pub triple: Option<Vec<GhzLabel>>,
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Task {
    Witness,
    Fqst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    Analytic,
}

impl std::str::FromStr for Shots {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" => Ok(Shots::Analytic),
            _ => s
                .parse()
                .map(Shots::Finite)
                .map_err(|_| format!("expected a positive integer or `inf`, got {s:?}")),
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub label: GhzLabel,
    /// White-noise weight in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Coincidences per setting, or `inf` for expected counts.
    #[arg(long, default_value = "10000")]
    pub shots: Shots,
    /// Expected accidental counts per outcome bin.
    #[arg(long, default_value_t = 0.0)]
    pub dark: f64,
    #[arg(long, value_enum, default_value_t = Task::Witness)]
    pub task: Task,
}

#[derive(Args, Debug)]
pub struct MixArgs {
    /// JSON object mapping labels to weights.
    #[arg(long)]
    pub weights: PathBuf,
    /// Directory holding `<label>.counts.jsonl` or `<label>.jsonl`.
    #[arg(long)]
    pub inputs: PathBuf,
    #[arg(long, value_enum, default_value_t = Task::Witness)]
    pub task: Task,
}
