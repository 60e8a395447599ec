//! `bench`: operation counts over a grid of `(n, q)`.
//!
//! The family for `(n, q)` has factors `λ − c`, `c = 1..q`, over GF(p). The
//! `n` dimensions are spread as evenly as possible over the factors, each
//! factor's multiplicity is split into two companion blocks of nearly equal
//! exponent, and the result is conjugated by a random unimodular matrix.

use minannih_core::annihilators::PHASE_COFACTORS;
use minannih_core::{
    assemble, naive_unit_annihilators, unit_minimal_annih, AnnihOptions, Assembled, Block, BlockSpec, Field, Mode,
    Poly, PrimeField, Residue, Similarity,
};

use crate::CliError;

pub const CSV_HEADER: &str = "algo,n,q,field_ops,block_apps,repairs,seed";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub algo: &'static str,
    pub n: usize,
    pub q: usize,
    pub field_ops: u64,
    pub block_apps: u64,
    pub repairs: usize,
    pub seed: u64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!("{},{},{},{},{},{},{}", self.algo, self.n, self.q, self.field_ops, self.block_apps, self.repairs, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    /// Grid points with no valid family (`q = 0`, `q > n` or `q ≥ p`).
    pub skipped: Vec<(usize, usize)>,
}

impl BenchOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv());
            out.push('\n');
        }
        out
    }
}

/// The benchmark matrix for `(n, q)`.
pub fn family(k: &PrimeField, n: usize, q: usize, seed: u64) -> Result<Assembled<Residue>, CliError> {
    if q == 0 || q > n || q as u64 >= k.modulus() {
        return Err(CliError::parse(format!("no benchmark family for n={n}, q={q}")));
    }
    let mut blocks = Vec::new();
    for c in 1..=q {
        let m = n / q + usize::from(c <= n % q);
        let f = Poly::linear(k, &k.from_i64(c as i64));
        for power in [m.div_ceil(2), m / 2] {
            if power > 0 {
                blocks.push(Block { f: f.clone(), power });
            }
        }
    }
    Ok(assemble(k, &BlockSpec { blocks, similarity: Similarity::RandomUnimodular(seed) })?)
}

pub fn bench(ns: &[usize], qs: &[usize], prime: u64, seed: u64) -> Result<BenchOutput, CliError> {
    let k = PrimeField::new(prime)?;
    let mut out = BenchOutput::default();
    for &n in ns {
        for &q in qs {
            let Ok(fam) = family(&k, n, q, seed) else {
                out.skipped.push((n, q));
                continue;
            };
            let (a, f) = (&fam.matrix, &fam.factors);
            let row = |algo, field_ops, block_apps, repairs| BenchRow { algo, n, q, field_ops, block_apps, repairs, seed };

            let naive = naive_unit_annihilators(&k, a, f, 1)?;
            out.rows.push(row("naive", naive.stats.cost.field_ops, naive.stats.cost.block_apps, 0));

            for (mode, pseudo_name, minimal_name) in [
                (Mode::Sequential, "pseudo-sequential", "minimal-sequential"),
                (Mode::BinarySplit, "pseudo-binary-split", "minimal-binary-split"),
            ] {
                let r = unit_minimal_annih(&k, a, f, &AnnihOptions { seed, mode, ..AnnihOptions::default() })?;
                let cost = &r.stats.cost;
                let pseudo = cost.phase_prefix("pseudo/");
                debug_assert_eq!(pseudo.block_apps, cost.phase(PHASE_COFACTORS).block_apps);
                out.rows.push(row(pseudo_name, pseudo.field_ops, pseudo.block_apps, r.stats.repairs));
                out.rows.push(row(minimal_name, cost.field_ops, cost.block_apps, r.stats.repairs));
            }
        }
    }
    Ok(out)
}
