use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "entangle",
    version,
    about = "Determinantal entanglement indicators and separability for pure states"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Coarse indicator convention: binary (0/1 per minor) or raw magnitudes.
    #[arg(long, value_enum, global = true, default_value_t = Mode::Binary)]
    pub mode: Mode,

    /// Zero threshold for minors (default 1e-10).
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tolerance: Option<f64>,

    /// State file: JSON `{"dims": [...], "amps": [[re, im], ...]}` or a
    /// text file holding one ket expression.
    #[arg(long, global = true, value_name = "PATH")]
    pub file: Option<PathBuf>,

    /// Seed for random state generation.
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Binary,
    Raw,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full indicator profile and separability report.
    Analyze(StateArgs),
    /// Peel single-site factors off a state.
    Factor(StateArgs),
    /// Measure one site (or a chain of sites) and profile the remainder.
    Measure(MeasureArgs),
    /// Recompute a reference classification table and compare.
    Tables {
        /// Table number (1: three qubits, 2: four qubits).
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Minor counts per level and the distinct-minor total.
    Count(CountArgs),
    /// Write seeded random states as JSON state files.
    Random(RandomArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Ket expression, e.g. "(1/sqrt(2))(|00>+|11>)".
    pub expression: Option<String>,

    /// Local dimensions for the expression (inferred from digits otherwise).
    #[arg(long, value_delimiter = ',', value_name = "D1,D2,...")]
    pub dims: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("measurement").required(true).args(["outcome", "direction", "chain"])))]
pub struct MeasureArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// Site to measure (1-based).
    #[arg(long, conflicts_with = "chain")]
    pub site: Option<usize>,

    /// Computational-basis outcome to keep.
    #[arg(long, requires = "site")]
    pub outcome: Option<usize>,

    /// Projection direction: comma-separated scalars, or x-plus / x-minus.
    #[arg(long, requires = "site", allow_hyphen_values = true)]
    pub direction: Option<String>,

    /// Sequence of site:outcome steps, sites numbered in the original state.
    #[arg(long, value_delimiter = ',', value_name = "SITE:OUTCOME,...")]
    pub chain: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Number of qubits.
    #[arg(long, conflicts_with = "dims", required_unless_present = "dims")]
    pub qubits: Option<u32>,

    /// Local dimensions.
    #[arg(long, value_delimiter = ',', value_name = "D1,D2,...")]
    pub dims: Option<Vec<usize>>,

    /// Report a single level.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    /// Local dimensions.
    #[arg(long, required = true, value_delimiter = ',', value_name = "D1,D2,...")]
    pub dims: Vec<usize>,

    /// Number of states to write.
    #[arg(long, default_value_t = 1)]
    pub count: u64,

    /// Output directory (created if missing).
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
}
