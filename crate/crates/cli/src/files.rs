//! JSON documents read and written by the CLI. All field elements travel as
//! strings: decimal integers or `a/b` fractions.

use minannih_core::{CostProfile, DenseMatrix, Error, FactoredPoly, Field, Poly, Result};
use serde::{Deserialize, Serialize};

use crate::format::{coeff_strings, poly_from_strings};

/// `"Q"` or `{"prime": p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { prime: u64 },
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Named("Q".into())
    }

    /// Parses the `--field` flag: `Q` or `p=7`.
    pub fn from_flag(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(Self::rationals());
        }
        t.strip_prefix("p=")
            .and_then(|p| p.parse::<u64>().ok())
            .map(|prime| FieldSpec::Prime { prime })
            .ok_or_else(|| Error::Parse(format!("field {s:?}: expected Q or p=<prime>")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    /// Ascending coefficients.
    pub factor: Vec<String>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: FieldSpec,
    pub n: usize,
    /// Row-major, `n²` entries.
    pub entries: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<Vec<FactorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly_bounds: Option<Vec<usize>>,
}

impl MatrixFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("matrix file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serializes")
    }

    pub fn from_matrix<F: Field>(field: FieldSpec, k: &F, a: &DenseMatrix<F::Elem>) -> Self {
        Self {
            field,
            n: a.dim(),
            entries: a.entries().iter().map(|e| k.format_element(e)).collect(),
            factorization: None,
            minpoly_bounds: None,
        }
    }

    pub fn matrix<F: Field>(&self, k: &F) -> Result<DenseMatrix<F::Elem>> {
        let entries = self.entries.iter().map(|s| k.parse_element(s)).collect::<Result<Vec<_>>>()?;
        DenseMatrix::from_rows(k, self.n, entries)
    }
}

pub fn factor_entries<F: Field>(k: &F, f: &FactoredPoly<F::Elem>) -> Vec<FactorEntry> {
    f.factors()
        .iter()
        .map(|(g, m)| FactorEntry { factor: coeff_strings(k, g), multiplicity: *m })
        .collect()
}

pub fn parse_factor_entries<F: Field>(k: &F, entries: &[FactorEntry]) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    entries.iter().map(|e| Ok((poly_from_strings(k, &e.factor)?, e.multiplicity))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor: String,
    pub multiplicity: usize,
}

/// Output of `compute`. Everything except `elapsed_ms` is a function of the
/// input bytes and the flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub input_sha256: String,
    pub field: String,
    pub n: usize,
    /// `naive` or `pseudo`.
    pub method: String,
    /// Cofactor mode of the pseudo method.
    pub mode: Option<String>,
    pub seed: u64,
    pub bounds: String,
    pub factors: Vec<FactorReport>,
    /// `q × n`; absent for the naive method.
    pub pseudo: Option<Vec<Vec<usize>>>,
    #[serde(rename = "true")]
    pub true_exps: Vec<Vec<usize>>,
    /// `π_{A,j}` for `j = 1, …, n`.
    pub unit_annihilators: Vec<String>,
    pub minimal_polynomial: String,
    pub repairs: usize,
    /// Present when `--verify` was given.
    pub verified: Option<bool>,
    pub cost: CostProfile,
    pub elapsed_ms: f64,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with its timing removed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        Self { elapsed_ms: 0.0, ..self.clone() }
    }
}

/// Ground truth written next to a generated matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthFile {
    pub factorization: Vec<FactorEntry>,
    pub minpoly_exponents: Vec<usize>,
    pub minimal_polynomial: String,
    /// `q × n` exponent table; absent for conjugated matrices.
    pub true_exps: Option<Vec<Vec<usize>>>,
}
