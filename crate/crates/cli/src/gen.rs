//! `gen`: matrix files from block specifications.

use minannih_core::{assemble, Block, BlockSpec, Factorize, GroundTruth, Poly, PrimeField, Rationals, Similarity};

use crate::files::{factor_entries, FieldSpec, MatrixFile, TruthFile};
use crate::format::render_factored;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    /// `c0,c1,…,cd:k` items: ascending coefficients of a monic irreducible
    /// `f` and the block exponent `k`.
    pub blocks: Vec<String>,
    pub field: FieldSpec,
    pub random_similarity: bool,
    pub seed: u64,
    /// Include the factorization and minimal-polynomial bounds in the file.
    pub emit_factorization: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOutput {
    pub matrix: MatrixFile,
    pub truth: TruthFile,
}

pub fn generate(opts: &GenOptions) -> Result<GenOutput, CliError> {
    match &opts.field {
        FieldSpec::Named(n) if n == "Q" => generate_in(&Rationals::new(), opts),
        FieldSpec::Named(n) => Err(CliError::parse(format!("unknown field {n:?}"))),
        FieldSpec::Prime { prime } => generate_in(&PrimeField::new(*prime)?, opts),
    }
}

fn parse_block<F: Factorize>(k: &F, s: &str) -> Result<Block<F::Elem>, CliError> {
    let (coeffs, power) =
        s.rsplit_once(':').ok_or_else(|| CliError::parse(format!("block {s:?}: expected coeffs:multiplicity")))?;
    let power = power.trim().parse().map_err(|_| CliError::parse(format!("block {s:?}: bad multiplicity")))?;
    let coeffs = coeffs.split(',').map(|c| k.parse_element(c.trim())).collect::<Result<Vec<_>, _>>()?;
    Ok(Block { f: Poly::new(k, coeffs), power })
}

fn generate_in<F: Factorize>(k: &F, opts: &GenOptions) -> Result<GenOutput, CliError> {
    if opts.blocks.is_empty() {
        return Err(CliError::parse("at least one --block is required"));
    }
    let blocks = opts.blocks.iter().map(|b| parse_block(k, b)).collect::<Result<Vec<_>, _>>()?;
    let similarity =
        if opts.random_similarity { Similarity::RandomUnimodular(opts.seed) } else { Similarity::None };
    let asm = assemble(k, &BlockSpec { blocks, similarity })?;

    let mut matrix = MatrixFile::from_matrix(opts.field.clone(), k, &asm.matrix);
    if opts.emit_factorization {
        matrix.factorization = Some(factor_entries(k, &asm.factors));
        matrix.minpoly_bounds = Some(asm.minpoly_exponents.clone());
    }
    let truth = TruthFile {
        factorization: factor_entries(k, &asm.factors),
        minpoly_exponents: asm.minpoly_exponents.clone(),
        minimal_polynomial: render_factored(k, &asm.minimal_poly()),
        true_exps: match &asm.truth {
            GroundTruth::Columns(t) => Some(t.entries.clone()),
            GroundTruth::MinPolyOnly => None,
        },
    };
    Ok(GenOutput { matrix, truth })
}
