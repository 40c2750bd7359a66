use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use landscape_core::descent::ImpForm;
use landscape_core::models::{Interpolation, Window};
use landscape_core::simulate::Probing;

#[derive(Debug, Parser)]
#[command(name = "landscape-lab", version, about = "Landscape analysis of blind search and local blind descent")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice (instances, sampling, simulation).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Directory for the emitted tables and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,

    /// `dat` also writes one two-column whitespace file per value column.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "LANDSCAPE_LAB_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Dat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic MAX-2-SAT class: cost probabilities, NWeights, bias and beneficial levels.
    Sat2(Sat2Args),
    /// 2-opt landscapes of random TSP instances, enumerated or sampled.
    Tsp(TspArgs),
    /// Uniform toy space with Lipschitz-bounded neighbourhoods: improvement probabilities and rates.
    Toy(ToyArgs),
    /// Best starting cost and savings of local blind descent across Lipschitz bounds.
    Benchmark(BenchmarkArgs),
    /// Best starting cost and savings of local blind descent across targets.
    Descent(DescentArgs),
    /// One-step improvement rates of blind and neighbour search over all costs.
    Rates(RatesArgs),
    /// Monte Carlo runs compared against the analytic step counts.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct Sat2Args {
    #[arg(long, default_value_t = 50)]
    pub vars: u64,
    #[arg(long, default_value_t = 100)]
    pub clauses: u64,
    /// Clauses each variable occurs in.
    #[arg(long, default_value_t = 4)]
    pub occurrences: u64,
    /// Cost level of the NWeight and bias table.
    #[arg(long, default_value_t = 17)]
    pub level: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TspMode {
    Enumerate,
    Sample,
}

#[derive(Debug, Args)]
pub struct TspArgs {
    #[arg(long, default_value_t = 10)]
    pub cities: usize,
    #[arg(long, value_enum, default_value_t = TspMode::Enumerate)]
    pub mode: TspMode,
    /// Random tours to draw in sample mode.
    #[arg(long, default_value_t = 400_000)]
    pub samples: usize,
    /// Analyse this many instances (seeds `seed ..`) and emit a pass/fail summary.
    #[arg(long, value_name = "N")]
    pub study: Option<u64>,
    /// Read the instance from a file instead of generating it.
    #[arg(long, conflicts_with = "study")]
    pub instance: Option<PathBuf>,
    /// Largest cost difference in the NWeight table at `k_ge`.
    #[arg(long, default_value_t = 50)]
    pub max_delta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum WindowArg {
    #[default]
    ZeroExtended,
    Padded,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::ZeroExtended => Window::ZeroExtended,
            WindowArg::Padded => Window::Padded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum InterpolationArg {
    #[default]
    Next,
    PlusOne,
}

impl From<InterpolationArg> for Interpolation {
    fn from(i: InterpolationArg) -> Self {
        match i {
            InterpolationArg::Next => Interpolation::Next,
            InterpolationArg::PlusOne => Interpolation::PlusOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ImpFormArg {
    #[default]
    Normalized,
    Truncated,
}

impl From<ImpFormArg> for ImpForm {
    fn from(f: ImpFormArg) -> Self {
        match f {
            ImpFormArg::Normalized => ImpForm::Normalized,
            ImpFormArg::Truncated => ImpForm::Truncated,
        }
    }
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    #[arg(long, default_value_t = 200)]
    pub kmax: i64,
    /// Lipschitz bounds, one table row each.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 5, 10, 50, 200])]
    pub bounds: Vec<u64>,
    /// Current cost.
    #[arg(long, default_value_t = 30)]
    pub k: i64,
    /// Best cost so far, for the improvement-below-target table.
    #[arg(long, default_value_t = 15)]
    pub target: i64,
    #[arg(long, value_enum, default_value_t)]
    pub window: WindowArg,
}

/// Benchmark class settings shared by the descent commands.
#[derive(Debug, Args)]
pub struct BenchmarkClass {
    /// Neighbourhood size `n`.
    #[arg(long, default_value_t = 50)]
    pub size: u64,
    #[arg(long, value_enum, default_value_t)]
    pub interpolation: InterpolationArg,
    /// Expected probes per level: normalized over successful levels, or the truncated sum.
    #[arg(long, value_enum, default_value_t)]
    pub imp_form: ImpFormArg,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1, 3, 5, 7, 9, 11, 13, 15, 17])]
    pub bounds: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    pub target: i64,
    #[command(flatten)]
    pub class: BenchmarkClass,
}

#[derive(Debug, Args)]
pub struct DescentArgs {
    #[arg(long, default_value_t = 7)]
    pub bound: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [0, 5, 10, 15, 20, 25, 30, 35, 40])]
    pub targets: Vec<i64>,
    /// Evaluate this starting cost for every target instead of only scanning;
    /// fails when a descent never completes.
    #[arg(long)]
    pub start: Option<i64>,
    #[command(flatten)]
    pub class: BenchmarkClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Toy,
    Benchmark,
    Sat2,
    Tsp,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long, value_enum, default_value_t = Family::Toy)]
    pub family: Family,
    /// Lipschitz bound for the toy and benchmark families.
    #[arg(long, default_value_t = 10)]
    pub bound: u64,
    /// Also tabulate improvement below this target cost.
    #[arg(long)]
    pub target: Option<i64>,
    /// Cities for the TSP family (enumerated).
    #[arg(long, default_value_t = 10)]
    pub cities: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ProbingArg {
    #[default]
    WithReplacement,
    WithoutReplacement,
}

impl From<ProbingArg> for Probing {
    fn from(p: ProbingArg) -> Self {
        match p {
            ProbingArg::WithReplacement => Probing::WithReplacement,
            ProbingArg::WithoutReplacement => Probing::WithoutReplacement,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Family::Benchmark)]
    pub family: Family,
    #[arg(long, default_value_t = 7)]
    pub bound: u64,
    /// Starting cost of the descent; for TSP defaults to `k_ge`.
    #[arg(long)]
    pub start: Option<i64>,
    /// Target cost; for TSP defaults to `k_opt + 10`.
    #[arg(long)]
    pub target: Option<i64>,
    /// Neighbourhood size; 0 means unbounded. TSP always uses the 2-opt size.
    #[arg(long, default_value_t = 50)]
    pub size: u64,
    #[arg(long, default_value_t = 100_000)]
    pub runs: u64,
    #[arg(long, default_value_t = landscape_core::simulate::DEFAULT_STEP_CAP)]
    pub step_cap: u64,
    /// Write the step-by-step log of the first N runs.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub trace: u64,
    #[arg(long, default_value_t = 10)]
    pub cities: usize,
    #[arg(long, value_enum, default_value_t)]
    pub probing: ProbingArg,
    #[arg(long, value_enum, default_value_t)]
    pub interpolation: InterpolationArg,
}
