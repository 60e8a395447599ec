use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "minannih", version, about = "Unit minimal annihilators of square matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the unit minimal annihilators and the minimal polynomial of a matrix file.
    Compute(ComputeArgs),
    /// Generate a matrix file from companion blocks.
    Gen(GenArgs),
    /// Print operation counts over a grid of sizes as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sequential,
    BinarySplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundsArg {
    Charpoly,
    Minpoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimilarityArg {
    None,
    Random,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Matrix file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "binary-split")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = positive)]
    pub threads: usize,
    /// Use the column-by-column method instead.
    #[arg(long)]
    pub naive: bool,
    /// Check every output against its defining property.
    #[arg(long)]
    pub verify: bool,
    /// Upper bounds for the exponent searches. `minpoly` reads `minpoly_bounds` from the file.
    #[arg(long, value_enum, default_value = "charpoly")]
    pub bounds: BoundsArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// `c0,c1,...,cd:k`: companion block of f^k, f having ascending coefficients c0..cd. Repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub block: Vec<String>,
    /// `Q` or `p=<prime>`.
    #[arg(long, default_value = "Q")]
    pub field: String,
    #[arg(long, value_enum, default_value = "none")]
    pub similarity: SimilarityArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the ground truth to this path.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Embed the factorization and minimal-polynomial bounds in the matrix file.
    #[arg(long)]
    pub emit_factorization: bool,
}

#[derive(Debug, Args)]
#[command(long_about = "Print operation counts over a grid of sizes as CSV.\n\n\
Columns: algo,n,q,field_ops,block_apps,repairs,seed\n\
  algo        naive, pseudo-sequential, pseudo-binary-split, minimal-sequential, minimal-binary-split\n\
  field_ops   field multiplications and additions\n\
  block_apps  vector-by-block products (one per Horner evaluation of a factor power)\n\
  repairs     columns whose pseudo exponents were corrected\n\n\
pseudo-* rows count only the pseudo-annihilator stage; minimal-* rows count the whole run.")]
pub struct BenchArgs {
    /// Comma-separated matrix sizes.
    #[arg(long, default_value = "")]
    pub n: String,
    /// Comma-separated factor counts.
    #[arg(long, default_value = "")]
    pub q: String,
    #[arg(long, default_value_t = 32003)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}
