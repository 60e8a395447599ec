//! `compute`: the full pipeline on one matrix file.

use std::time::Instant;

use minannih_core::{
    char_poly, factor_irreducible, naive_unit_annihilators, unit_minimal_annih, verify_column,
    verify_minimal_polynomial, AnnihOptions, Bounds, FactorOptions, FactoredPoly, Factorize, Mode, Poly,
    PrimeField, Rationals,
};
use sha2::{Digest, Sha256};

use crate::files::{parse_factor_entries, FactorReport, FieldSpec, MatrixFile, ReportFile};
use crate::format::{render_factored, render_poly};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsChoice {
    #[default]
    CharPoly,
    /// Use `minpoly_bounds` from the input file.
    MinPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputeOptions {
    pub mode: Mode,
    pub seed: u64,
    pub threads: usize,
    pub naive: bool,
    pub verify: bool,
    pub bounds: BoundsChoice,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self { mode: Mode::BinarySplit, seed: 0, threads: 1, naive: false, verify: false, bounds: BoundsChoice::CharPoly }
    }
}

pub fn compute(bytes: &[u8], opts: &ComputeOptions) -> Result<ReportFile, CliError> {
    let file = MatrixFile::parse(bytes)?;
    let digest = format!("{:x}", Sha256::digest(bytes));
    match &file.field {
        FieldSpec::Named(name) if name == "Q" => run(&Rationals::new(), &file, digest, opts),
        FieldSpec::Named(name) => Err(CliError::parse(format!("unknown field {name:?}; expected \"Q\" or {{\"prime\": p}}"))),
        FieldSpec::Prime { prime } => run(&PrimeField::new(*prime)?, &file, digest, opts),
    }
}

/// The factorization to use, in canonical order, with `minpoly_bounds`
/// permuted alongside when the file supplies its own factor order.
#[allow(clippy::type_complexity)]
fn resolve_factorization<F: Factorize>(
    k: &F,
    chi: &Poly<F::Elem>,
    file: &MatrixFile,
) -> Result<(FactoredPoly<F::Elem>, Option<Vec<usize>>), CliError> {
    let Some(entries) = &file.factorization else {
        let factors = factor_irreducible(k, chi, &FactorOptions::default())?;
        return Ok((factors, file.minpoly_bounds.clone()));
    };
    let raw = parse_factor_entries(k, entries)?;
    if let Some(b) = &file.minpoly_bounds {
        if b.len() != raw.len() {
            return Err(CliError::parse(format!(
                "minpoly_bounds has {} entries but the factorization has {}",
                b.len(),
                raw.len()
            )));
        }
    }
    for (f, _) in &raw {
        let irreducible = f.is_monic(k) && f.degree().is_some_and(|d| d > 0) && k.is_irreducible(f)?;
        if !irreducible {
            return Err(CliError::mismatch(format!("factor {} is not monic irreducible", render_poly(k, f))));
        }
    }
    let mut tagged: Vec<_> = raw
        .into_iter()
        .enumerate()
        .map(|(i, (f, m))| (f, m, file.minpoly_bounds.as_ref().map(|b| b[i])))
        .collect();
    tagged.sort_by(|a, b| Poly::cmp_canonical(k, &a.0, &b.0));
    let bounds = file.minpoly_bounds.as_ref().map(|_| tagged.iter().map(|t| t.2.expect("bound present")).collect());
    let factors = FactoredPoly::new(k, tagged.into_iter().map(|(f, m, _)| (f, m)).collect())
        .map_err(|e| CliError::mismatch(e.to_string()))?;
    if factors.expand(k) != *chi {
        return Err(CliError::mismatch("supplied factorization does not expand to the characteristic polynomial"));
    }
    Ok((factors, bounds))
}

fn run<F: Factorize>(k: &F, file: &MatrixFile, digest: String, opts: &ComputeOptions) -> Result<ReportFile, CliError> {
    let start = Instant::now();
    let a = file.matrix(k)?;
    let chi = char_poly(k, &a);
    let (factors, minpoly_bounds) = resolve_factorization(k, &chi, file)?;
    let bounds = match opts.bounds {
        BoundsChoice::CharPoly => Bounds::CharPoly,
        BoundsChoice::MinPoly => Bounds::MinPoly(
            minpoly_bounds.ok_or_else(|| CliError::parse("--bounds minpoly needs minpoly_bounds in the input file"))?,
        ),
    };

    let report = if opts.naive {
        naive_unit_annihilators(k, &a, &factors, opts.threads)?
    } else {
        let annih = AnnihOptions { seed: opts.seed, mode: opts.mode, bounds: bounds.clone(), threads: opts.threads };
        unit_minimal_annih(k, &a, &factors, &annih)?
    };

    let verified = if opts.verify {
        let columns_ok =
            (0..a.dim()).all(|j| verify_column(k, &a, &factors, j, &report.true_exps.column(j)));
        let minpoly_ok = verify_minimal_polynomial(k, &a, &factors, &report.true_exps.row_max());
        if !(columns_ok && minpoly_ok) {
            return Err(CliError::internal("verification of the computed annihilators failed"));
        }
        Some(true)
    } else {
        None
    };

    Ok(ReportFile {
        input_sha256: digest,
        field: k.kind().to_string(),
        n: a.dim(),
        method: if opts.naive { "naive" } else { "pseudo" }.into(),
        mode: (!opts.naive).then(|| opts.mode.to_string()),
        seed: opts.seed,
        bounds: match bounds {
            Bounds::CharPoly => "charpoly",
            Bounds::MinPoly(_) => "minpoly",
        }
        .into(),
        factors: factors
            .factors()
            .iter()
            .map(|(f, m)| FactorReport { factor: render_poly(k, f), multiplicity: *m })
            .collect(),
        pseudo: report.pseudo.as_ref().map(|t| t.entries.clone()),
        unit_annihilators: report
            .true_exps
            .columns()
            .iter()
            .map(|col| render_factored(k, &factors.with_exponents(col)))
            .collect(),
        true_exps: report.true_exps.entries.clone(),
        minimal_polynomial: render_factored(k, &report.minimal_poly),
        repairs: report.stats.repairs,
        verified,
        cost: report.stats.cost,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
