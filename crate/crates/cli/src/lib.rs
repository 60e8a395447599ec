//! Library side of the `minannih` command: file formats, subcommand drivers
//! and the exit-code mapping.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use minannih_core::Error;

pub mod bench;
pub mod cli;
pub mod compute;
pub mod files;
pub mod format;
pub mod gen;

use cli::{BoundsArg, Cli, Command, ModeArg, SimilarityArg};
use compute::{BoundsChoice, ComputeOptions};
use files::FieldSpec;
use gen::GenOptions;

/// An error with the process exit code it maps to.
///
/// * 2: malformed input or arguments
/// * 3: supplied factorization does not match the matrix
/// * 4: internal failure
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Self { code: 3, message: msg.into() }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Self { code: 4, message: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FactorizationMismatch => 3,
            Error::RepairNonTermination { .. }
            | Error::ZeroRandomVector
            | Error::SingularSimilarity
            | Error::Internal(_) => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| CliError::parse(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| CliError::parse(format!("reading {}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::internal(format!("writing {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::internal(format!("writing stdout: {e}"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::parse(format!("expected a comma-separated list of integers, got {s:?}"))))
        .collect()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => {
            let bytes = read_input(&args.input)?;
            let opts = ComputeOptions {
                mode: match args.mode {
                    ModeArg::Sequential => minannih_core::Mode::Sequential,
                    ModeArg::BinarySplit => minannih_core::Mode::BinarySplit,
                },
                seed: args.seed,
                threads: args.threads,
                naive: args.naive,
                verify: args.verify,
                bounds: match args.bounds {
                    BoundsArg::Charpoly => BoundsChoice::CharPoly,
                    BoundsArg::Minpoly => BoundsChoice::MinPoly,
                },
            };
            let report = compute::compute(&bytes, &opts)?;
            write_output(args.output.as_deref(), &report.to_json())
        }
        Command::Gen(args) => {
            let opts = GenOptions {
                blocks: args.block,
                field: FieldSpec::from_flag(&args.field)?,
                random_similarity: args.similarity == SimilarityArg::Random,
                seed: args.seed,
                emit_factorization: args.emit_factorization,
            };
            let out = gen::generate(&opts)?;
            if let Some(t) = &args.truth {
                let json = serde_json::to_string_pretty(&out.truth).expect("truth serializes");
                write_output(Some(t), &json)?;
            }
            write_output(args.output.as_deref(), &out.matrix.to_json())
        }
        Command::Bench(args) => {
            let out = bench::bench(&parse_list(&args.n)?, &parse_list(&args.q)?, args.prime, args.seed)?;
            for (n, q) in &out.skipped {
                eprintln!("skipping n={n}, q={q}: no benchmark family");
            }
            write_output(args.output.as_deref(), &out.to_csv())
        }
    }
}
