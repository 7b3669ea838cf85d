mod bench;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tilefmm::sampling::StrengthMode;
use tilefmm::Structure;

#[derive(Parser)]
#[command(name = "tilefmm", version, about = "2D log-kernel FMM over quadtree, septree and triangle-quadtree tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one FMM evaluation and print a summary.
    Run(RunArgs),
    /// Sweep N or p and write one CSV row per structure and value.
    Bench(BenchArgs),
    /// Run the built-in invariant checks.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    Quadtree,
    Septree,
    Triquad,
}

impl From<StructureArg> for Structure {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Quadtree => Structure::Quadtree,
            StructureArg::Septree => Structure::Septree,
            StructureArg::Triquad => Structure::TriangleQuadtree,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrengthArg {
    Unit,
    Uniform,
}

impl From<StrengthArg> for StrengthMode {
    fn from(s: StrengthArg) -> Self {
        match s {
            StrengthArg::Unit => StrengthMode::Unit,
            StrengthArg::Uniform => StrengthMode::Uniform,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    N,
    Terms,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub structure: StructureArg,
    /// Leaf depth; chosen from the optimal leaf density when omitted.
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
    /// Number of generated sources.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Number of generated targets; defaults to `--n`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Read sources (`x y u` per line) instead of generating them.
    #[arg(long)]
    pub points_file: Option<PathBuf>,
    /// Read targets (`x y` per line) instead of generating them.
    #[arg(long)]
    pub targets_file: Option<PathBuf>,
    /// Compare against the direct sum and fail if the error exceeds the bound.
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_enum, default_value_t = StrengthArg::Unit)]
    pub strengths: StrengthArg,
    /// Leaf cell scale.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Write the potentials as CSV to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepArg,
    /// Restrict to one structure; all three by default.
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    /// Comma-separated sweep values. Defaults to 320..5120 doubling for `n`
    /// and 2..20 step 2 for `terms`.
    #[arg(long)]
    pub values: Option<String>,
    /// Fixed leaf depth; chosen per row when omitted.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Terms for an `n` sweep.
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
    /// N = M for a `terms` sweep.
    #[arg(long, default_value_t = 5120)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = StrengthArg::Unit)]
    pub strengths: StrengthArg,
    /// Skip the direct sum when N or M exceeds this.
    #[arg(long, default_value_t = 20480)]
    pub direct_cutoff: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure modes mapped to exit codes.
pub enum Failure {
    /// A check ran and did not pass.
    Check(String),
    /// Bad input: unreadable files, points outside the domain, bad values.
    Usage(String),
}

impl From<tilefmm::Error> for Failure {
    fn from(e: tilefmm::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
        Command::Verify => verify::cmd_verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("tilefmm: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("tilefmm: {msg}");
            ExitCode::from(2)
        }
    }
}
