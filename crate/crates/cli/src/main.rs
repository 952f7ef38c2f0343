use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod export;

#[derive(Parser, Debug)]
#[command(name = "polylabel", version, about = "Polycube labeling of closed triangle meshes")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a graph-cut initial labeling.
    Init(InitArgs),
    /// Optimize a labeling with the evolutionary search.
    Optimize(OptimizeArgs),
    /// Print fitness metrics of a labeling as JSON.
    Evaluate(EvaluateArgs),
    /// Write a per-face colored PLY and the fast polycube as OBJ.
    ExportViz(ExportArgs),
    /// Apply a single mutation (debugging aid).
    Mutate(MutateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// Weight of the workability term.
    #[arg(long, env = "POLYLABEL_W1", default_value_t = 100.0)]
    pub w1: f64,
    /// Weight of the fidelity term.
    #[arg(long, env = "POLYLABEL_W2", default_value_t = 0.01)]
    pub w2: f64,
    /// Weight of the compactness term.
    #[arg(long, env = "POLYLABEL_W3", default_value_t = 0.01)]
    pub w3: f64,
}

#[derive(Args, Debug)]
pub struct InitArgs {
    /// Input mesh (.obj, .stl, .ply or MEDIT .mesh).
    pub input: PathBuf,
    /// Ratio between unary and binary graph-cut weights.
    #[arg(long, env = "POLYLABEL_RATIO", default_value_t = 3.0)]
    pub ratio: f64,
    /// Output labeling file [default: <input stem>.labeling.txt].
    #[arg(short, long, env = "POLYLABEL_OUTPUT")]
    pub output: Option<PathBuf>,
    /// JSON report path [default: <output>.json].
    #[arg(long, env = "POLYLABEL_REPORT")]
    pub report: Option<PathBuf>,
    /// Skip the opposite-boundary and high-valency repairs.
    #[arg(long, env = "POLYLABEL_NO_REPAIR")]
    pub no_repair: bool,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Input mesh (.obj, .stl, .ply or MEDIT .mesh).
    pub input: PathBuf,
    /// Start from this labeling instead of a graph-cut initialization.
    #[arg(long, env = "POLYLABEL_LABELING")]
    pub labeling: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "POLYLABEL_OUT_DIR", default_value = "polylabel-out")]
    pub out_dir: PathBuf,
    #[arg(long, env = "POLYLABEL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of generations.
    #[arg(long, env = "POLYLABEL_GENERATIONS", default_value_t = 40)]
    pub generations: u32,
    /// Individuals mutated per generation.
    #[arg(long, env = "POLYLABEL_POPULATION", default_value_t = 100)]
    pub population: usize,
    /// Crossover children per generation.
    #[arg(long, env = "POLYLABEL_CROSSOVERS", default_value_t = 10)]
    pub crossovers: usize,
    #[arg(long, env = "POLYLABEL_ARCHIVE_SIZE", default_value_t = 100)]
    pub archive_size: usize,
    /// Generations without a new best before stopping.
    #[arg(long, env = "POLYLABEL_STALL_LIMIT", default_value_t = 3)]
    pub stall_limit: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "POLYLABEL_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Graph-cut ratio for the initialization and chart removal.
    #[arg(long, env = "POLYLABEL_RATIO", default_value_t = 3.0)]
    pub ratio: f64,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    pub input: PathBuf,
    pub labeling: PathBuf,
    /// Smooth boundaries before measuring.
    #[arg(long, env = "POLYLABEL_SMOOTH")]
    pub smooth: bool,
    /// Write the report here instead of standard output.
    #[arg(short, long, env = "POLYLABEL_OUTPUT")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    pub input: PathBuf,
    pub labeling: PathBuf,
    #[arg(long, env = "POLYLABEL_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Random,
    DirectionalPath,
    ChartRemoval,
    ChartPropagation,
}

#[derive(Args, Debug)]
pub struct MutateArgs {
    pub input: PathBuf,
    pub labeling: PathBuf,
    #[arg(long, value_enum, env = "POLYLABEL_KIND", default_value = "random")]
    pub kind: KindArg,
    #[arg(long, env = "POLYLABEL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Generation written into the stamps of changed triangles.
    #[arg(long, env = "POLYLABEL_GENERATION", default_value_t = 1)]
    pub generation: u32,
    #[arg(long, env = "POLYLABEL_RATIO", default_value_t = 3.0)]
    pub ratio: f64,
    #[arg(short, long, env = "POLYLABEL_OUTPUT")]
    pub output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Init(a) => commands::init(&a),
        Command::Optimize(a) => commands::optimize(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::ExportViz(a) => commands::export_viz(&a),
        Command::Mutate(a) => commands::mutate(&a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
