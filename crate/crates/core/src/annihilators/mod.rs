//! Unit annihilating polynomials.
//!
//! All routines take `A` together with the factorization
//! `χ_A = f_1^{m_1}⋯f_q^{m_q}` and report exponents of the `f_i`. Column
//! indices `j` are 0-based.
//!
//! * [`naive_unit_annihilator`] computes one column directly from
//!   `g_i(A)e_j`, where `g_i = χ_A / f_i^{m_i}`.
//! * [`unit_pseudo_annih`] computes a table of lower bounds for all columns
//!   at once from the row sequences `u·g_i(A)·f_i(A)^k`.
//! * [`unit_minimal_annih`] certifies each pseudo column and repairs the
//!   ones that fail, giving the exact table.

mod tree;

pub use tree::{split_point, SplitTreeNode};

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::instrumentation::{CostProfile, OpCounter};
use crate::matrices::{
    apply_power_col, apply_power_row, char_poly, matrix_vector_horner, vector_matrix_horner, ColVector, DenseMatrix,
    RowVector,
};
use crate::polynomials::{lcm_of_factored, FactoredPoly, Poly};

pub const PHASE_COFACTORS: &str = "pseudo/cofactors";
pub const PHASE_SWEEP: &str = "pseudo/sweep";
pub const PHASE_CERTIFY: &str = "certify";
pub const PHASE_REPAIR: &str = "repair";
pub const PHASE_NAIVE: &str = "naive";

/// How the cofactor vectors `u·g_i(A)` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One Horner evaluation of `g_i` per factor.
    Sequential,
    /// Shared partial products along the splitting tree.
    #[default]
    BinarySplit,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sequential => "sequential",
            Mode::BinarySplit => "binary-split",
        })
    }
}

/// Per-factor exponent limits for the sweep and the repair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Bounds {
    /// Multiplicities in the characteristic polynomial.
    #[default]
    CharPoly,
    /// Exponents of the minimal polynomial, one per factor.
    MinPoly(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Pseudo,
    True,
}

/// `q × n` table of factor exponents; `entries[i][j]` is the exponent of
/// `f_i` in the annihilator of column `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentTable {
    pub kind: TableKind,
    pub q: usize,
    pub n: usize,
    pub entries: Vec<Vec<usize>>,
}

impl ExponentTable {
    pub fn from_columns(kind: TableKind, q: usize, columns: &[Vec<usize>]) -> Self {
        let n = columns.len();
        let entries = (0..q).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Self { kind, q, n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        self.entries.iter().map(|row| row[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    /// Entrywise `self ≤ other`.
    pub fn dominated_by(&self, other: &ExponentTable) -> bool {
        self.q == other.q
            && self.n == other.n
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y))
    }

    /// Number of columns that differ from `other`.
    pub fn differing_columns(&self, other: &ExponentTable) -> usize {
        (0..self.n).filter(|&j| self.column(j) != other.column(j)).count()
    }

    /// Row-wise maximum.
    pub fn row_max(&self) -> Vec<usize> {
        self.entries.iter().map(|row| row.iter().copied().max().unwrap_or(0)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub cost: CostProfile,
    /// Columns whose pseudo exponents were not the true ones.
    pub repairs: usize,
    /// Seed of the projection vector, if it was drawn at random.
    pub seed: Option<u64>,
    /// `None` for the naive method.
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorReport<E> {
    pub factors: FactoredPoly<E>,
    /// Absent for the naive method.
    pub pseudo: Option<ExponentTable>,
    pub true_exps: ExponentTable,
    pub minimal_poly: FactoredPoly<E>,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihOptions {
    pub seed: u64,
    pub mode: Mode,
    pub bounds: Bounds,
    /// Worker threads; results do not depend on this.
    pub threads: usize,
}

impl Default for AnnihOptions {
    fn default() -> Self {
        Self { seed: 0, mode: Mode::BinarySplit, bounds: Bounds::CharPoly, threads: 1 }
    }
}

/// Shared read-only state of one run.
pub(crate) struct Context<'a, F: Field> {
    k: F,
    a: &'a DenseMatrix<F::Elem>,
    factors: &'a FactoredPoly<F::Elem>,
}

impl<'a, F: Field> Context<'a, F> {
    /// Checks that `factors` is a factorization of `χ_A`. The check itself is
    /// not counted.
    fn new(k: &F, a: &'a DenseMatrix<F::Elem>, factors: &'a FactoredPoly<F::Elem>) -> Result<Self> {
        let plain = k.without_counter();
        if factors.degree() != a.dim() || factors.expand(&plain) != char_poly(&plain, a) {
            return Err(Error::FactorizationMismatch);
        }
        Ok(Self { k: k.clone(), a, factors })
    }

    fn n(&self) -> usize {
        self.a.dim()
    }

    fn q(&self) -> usize {
        self.factors.len()
    }

    fn f(&self, i: usize) -> &Poly<F::Elem> {
        self.factors.factor(i)
    }

    fn m(&self, i: usize) -> usize {
        self.factors.multiplicity(i)
    }

    fn in_phase<R>(&self, name: &str, f: impl FnOnce() -> R) -> R {
        match self.k.counter() {
            Some(c) => c.measure(name, f),
            None => f(),
        }
    }

    fn tally_blocks(&self, count: u64) {
        if let Some(c) = self.k.counter() {
            c.add_block_apps(count);
        }
    }

    /// `g_i = Π_{l≠i} f_l^{m_l}`, built without counting.
    fn cofactor(&self, i: usize) -> Poly<F::Elem> {
        let plain = self.k.without_counter();
        (0..self.q())
            .filter(|&l| l != i)
            .fold(Poly::one(&plain), |acc, l| acc.mul(&plain, &self.f(l).pow(&plain, self.m(l))))
    }

    /// `w · Π_{l ∈ range} F_l^{m_l}`, one block at a time.
    fn apply_blocks_row(&self, range: RangeInclusive<usize>, w: &RowVector<F::Elem>) -> Result<RowVector<F::Elem>> {
        let mut out = w.clone();
        for l in range {
            out = apply_power_row(&self.k, self.f(l), self.a, &out, self.m(l))?;
            self.tally_blocks(1);
        }
        Ok(out)
    }

    /// `u·g_i(A)` by a single Horner evaluation; `g_i` stands for `q − 1`
    /// blocks.
    fn cofactor_row(&self, i: usize, u: &RowVector<F::Elem>) -> Result<RowVector<F::Elem>> {
        let w = vector_matrix_horner(&self.k, &self.cofactor(i), self.a, u)?;
        self.tally_blocks(self.q() as u64 - 1);
        Ok(w)
    }

    fn cofactor_rows(&self, u: &RowVector<F::Elem>, mode: Mode) -> Result<Vec<RowVector<F::Elem>>> {
        match mode {
            Mode::Sequential => (0..self.q()).into_par_iter().map(|i| self.cofactor_row(i, u)).collect(),
            Mode::BinarySplit => Ok(tree::build(self, 0, self.q() - 1, u.clone())?.into_leaves()),
        }
    }

    /// Sweep for one factor: the first `k < bound` at
    /// which each coordinate of `w·f_i(A)^k` vanishes, else `bound`.
    fn sweep(&self, i: usize, mut w: RowVector<F::Elem>, bound: usize) -> Result<Vec<usize>> {
        let n = self.n();
        let mut rho: Vec<Option<usize>> = vec![None; n];
        let mut unresolved = n;
        for step in 0..bound {
            for (j, slot) in rho.iter_mut().enumerate() {
                if slot.is_none() && self.k.is_zero(&w.0[j]) {
                    *slot = Some(step);
                    unresolved -= 1;
                }
            }
            if unresolved == 0 {
                break;
            }
            // The product after the last check is never inspected.
            if step + 1 < bound {
                w = vector_matrix_horner(&self.k, self.f(i), self.a, &w)?;
            }
        }
        Ok(rho.into_iter().map(|r| r.unwrap_or(bound)).collect())
    }

    /// Least `k ≤ limit` with `f(A)^k v = 0`, assuming `f(A)^limit v = 0`.
    fn vanishing_order(&self, f: &Poly<F::Elem>, mut v: ColVector<F::Elem>, limit: usize) -> Result<usize> {
        for k in 0..limit {
            if v.is_zero(&self.k) {
                return Ok(k);
            }
            if k + 1 < limit {
                v = matrix_vector_horner(&self.k, f, self.a, &v)?;
            }
        }
        Ok(limit)
    }

    fn naive_column(&self, j: usize) -> Result<Vec<usize>> {
        let e = ColVector::unit(&self.k, self.n(), j);
        (0..self.q())
            .map(|i| {
                let b = matrix_vector_horner(&self.k, &self.cofactor(i), self.a, &e)?;
                self.tally_blocks(self.q() as u64 - 1);
                self.vanishing_order(self.f(i), b, self.m(i))
            })
            .collect()
    }

    /// `Π_i f_i(A)^{col_i} e_j`.
    fn apply_column(&self, j: usize, col: &[usize]) -> Result<ColVector<F::Elem>> {
        let mut v = ColVector::unit(&self.k, self.n(), j);
        for (i, &e) in col.iter().enumerate() {
            v = apply_power_col(&self.k, self.f(i), self.a, &v, e)?;
        }
        Ok(v)
    }

    /// Lifts pseudo exponents `rho` of column `j` to the true ones, given
    /// `v0 = π'(A)e_j ≠ 0`.
    ///
    /// `saved[s]` holds `f_1^{m_1}⋯f_s^{m_s} f_{s+1}^{ρ_{s+1}}⋯f_q^{ρ_q} e_j`
    /// (1-based `s`). The ascent raises factors to their bounds in order
    /// until the vector dies, which fixes the topmost deficient factor. The
    /// descent then fixes the factors below it one by one from the saved
    /// vectors.
    fn repair(&self, j: usize, rho: &[usize], bounds: &[usize], v0: ColVector<F::Elem>) -> Result<Vec<usize>> {
        let q = self.q();
        let mut r = rho.to_vec();
        let mut saved = vec![v0.clone()];
        let mut v = v0;
        let mut top = None;

        'ascend: for i in 0..q {
            for l in 1..=bounds[i] - rho[i] {
                v = matrix_vector_horner(&self.k, self.f(i), self.a, &v)?;
                if v.is_zero(&self.k) {
                    r[i] = rho[i] + l;
                    log::trace!("column {j}: ascent stops at factor {i} with f^{l}");
                    // saved[i] is the vector that just died; the descent
                    // reads only saved[..i].
                    for s in saved.iter_mut().take(i) {
                        *s = apply_power_col(&self.k, self.f(i), self.a, s, l)?;
                    }
                    top = Some(i);
                    break 'ascend;
                }
            }
            saved.push(v.clone());
        }
        let top = top.ok_or(Error::RepairNonTermination { column: j })?;

        for k in (0..top).rev() {
            let limit = bounds[k] - rho[k];
            let mut v = saved[k].clone();
            let mut l = 0;
            while l < limit && !v.is_zero(&self.k) {
                v = matrix_vector_horner(&self.k, self.f(k), self.a, &v)?;
                l += 1;
            }
            if !v.is_zero(&self.k) {
                return Err(Error::RepairNonTermination { column: j });
            }
            r[k] = rho[k] + l;
            log::trace!("column {j}: descent sets factor {k} to rho+{l}");
            for s in saved.iter_mut().take(k) {
                *s = apply_power_col(&self.k, self.f(k), self.a, s, l)?;
            }
        }
        Ok(r)
    }

    fn resolve_bounds(&self, bounds: &Bounds) -> Result<Vec<usize>> {
        let m = self.factors.multiplicities();
        match bounds {
            Bounds::CharPoly => Ok(m),
            Bounds::MinPoly(l) => {
                if l.len() != m.len() {
                    return Err(Error::InvalidBounds(format!("expected {} bounds, found {}", m.len(), l.len())));
                }
                if let Some(i) = (0..m.len()).find(|&i| l[i] > m[i]) {
                    return Err(Error::InvalidBounds(format!(
                        "bound {} for factor {} exceeds its multiplicity {}",
                        l[i],
                        i + 1,
                        m[i]
                    )));
                }
                Ok(l.clone())
            }
        }
    }

    fn pseudo_table(&self, u: &RowVector<F::Elem>, mode: Mode, bounds: &[usize]) -> Result<ExponentTable> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: u.len() });
        }
        if self.n() == 0 {
            return Ok(ExponentTable { kind: TableKind::Pseudo, q: 0, n: 0, entries: vec![] });
        }
        if u.is_zero(&self.k) {
            return Err(Error::ZeroRandomVector);
        }
        let leaves = self.in_phase(PHASE_COFACTORS, || self.cofactor_rows(u, mode))?;
        let rows = self.in_phase(PHASE_SWEEP, || {
            leaves
                .par_iter()
                .enumerate()
                .map(|(i, w)| self.sweep(i, w.clone(), bounds[i]))
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(ExponentTable { kind: TableKind::Pseudo, q: self.q(), n: self.n(), entries: rows })
    }

    fn minimal_from_pseudo(&self, pseudo: &ExponentTable, bounds: &[usize]) -> Result<(ExponentTable, usize)> {
        let cols = pseudo.columns();
        let residues = self.in_phase(PHASE_CERTIFY, || {
            (0..self.n())
                .into_par_iter()
                .map(|j| {
                    let v = self.apply_column(j, &cols[j])?;
                    Ok((!v.is_zero(&self.k)).then_some(v))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let repaired = self.in_phase(PHASE_REPAIR, || {
            residues
                .into_par_iter()
                .enumerate()
                .map(|(j, v)| v.map(|v| self.repair(j, &cols[j], bounds, v)).transpose())
                .collect::<Result<Vec<_>>>()
        })?;
        let repairs = repaired.iter().filter(|c| c.is_some()).count();
        let columns: Vec<Vec<usize>> =
            repaired.into_iter().zip(cols).map(|(fixed, pseudo)| fixed.unwrap_or(pseudo)).collect();
        Ok((ExponentTable::from_columns(TableKind::True, self.q(), &columns), repairs))
    }
}

/// Runs `f` on a pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

/// Attaches a fresh counter for one run. Its totals are forwarded to the
/// caller's counter, if any, when the run finishes.
fn instrumented<F: Field, R>(k: &F, run: impl FnOnce(&F) -> Result<R>) -> Result<(R, CostProfile)> {
    let counter = OpCounter::shared();
    let out = run(&k.with_counter(Arc::clone(&counter)))?;
    let profile = counter.profile();
    if let Some(outer) = k.counter() {
        outer.add_field_ops(profile.field_ops);
        outer.add_block_apps(profile.block_apps);
    }
    Ok((out, profile))
}

/// The row vector `u` drawn from `seed`, redrawn while zero.
pub fn random_projection<F: Field>(k: &F, n: usize, seed: u64) -> RowVector<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let u = RowVector((0..n).map(|_| k.random_element(&mut rng)).collect());
        if n == 0 || !u.is_zero(k) {
            return u;
        }
    }
}

/// Exponents of `π_{A,j}`, one column at a time.
pub fn naive_unit_annihilator<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    j: usize,
) -> Result<Vec<usize>> {
    let ctx = Context::new(k, a, factors)?;
    if j >= ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: j + 1 });
    }
    ctx.naive_column(j)
}

/// The column-by-column method on every column.
pub fn naive_unit_annihilators<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    threads: usize,
) -> Result<AnnihilatorReport<F::Elem>> {
    let (true_exps, cost) = instrumented(k, |k| {
        let ctx = Context::new(k, a, factors)?;
        let columns: Vec<Vec<usize>> = ctx.in_phase(PHASE_NAIVE, || {
            with_threads(threads, || (0..ctx.n()).into_par_iter().map(|j| ctx.naive_column(j)).collect::<Result<Vec<_>>>())
        })??;
        Ok(ExponentTable::from_columns(TableKind::True, ctx.q(), &columns))
    })?;
    Ok(AnnihilatorReport {
        factors: factors.clone(),
        pseudo: None,
        minimal_poly: lcm_of_factored(&true_exps.columns(), factors),
        true_exps,
        stats: RunStats { cost, repairs: 0, seed: None, mode: None },
    })
}

/// Pseudo exponent table for the projection `u`.
pub fn unit_pseudo_annih<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    u: &RowVector<F::Elem>,
    mode: Mode,
    bounds: &Bounds,
) -> Result<ExponentTable> {
    let ctx = Context::new(k, a, factors)?;
    let bounds = ctx.resolve_bounds(bounds)?;
    ctx.pseudo_table(u, mode, &bounds)
}

/// The splitting tree whose leaves are `u·G_p`.
pub fn build_split_tree<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    u: &RowVector<F::Elem>,
) -> Result<SplitTreeNode<F::Elem>> {
    let ctx = Context::new(k, a, factors)?;
    if u.len() != ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: u.len() });
    }
    if ctx.q() == 0 {
        return Err(Error::InvalidPolynomial("empty factorization".into()));
    }
    tree::build(&ctx, 0, ctx.q() - 1, u.clone())
}

/// Exact exponent table via pseudo annihilators, certification and repair,
/// with `u` drawn from `opts.seed`.
pub fn unit_minimal_annih<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    opts: &AnnihOptions,
) -> Result<AnnihilatorReport<F::Elem>> {
    let u = random_projection(k, a.dim(), opts.seed);
    let mut report = unit_minimal_annih_with(k, a, factors, &u, opts)?;
    report.stats.seed = Some(opts.seed);
    Ok(report)
}

/// As [`unit_minimal_annih`] with an explicit projection vector.
pub fn unit_minimal_annih_with<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    u: &RowVector<F::Elem>,
    opts: &AnnihOptions,
) -> Result<AnnihilatorReport<F::Elem>> {
    let ((pseudo, true_exps, repairs), cost) = instrumented(k, |k| {
        let ctx = Context::new(k, a, factors)?;
        let bounds = ctx.resolve_bounds(&opts.bounds)?;
        with_threads(opts.threads, || {
            let pseudo = ctx.pseudo_table(u, opts.mode, &bounds)?;
            let (true_exps, repairs) = ctx.minimal_from_pseudo(&pseudo, &bounds)?;
            Ok((pseudo, true_exps, repairs))
        })?
    })?;
    Ok(AnnihilatorReport {
        factors: factors.clone(),
        minimal_poly: lcm_of_factored(&true_exps.columns(), factors),
        pseudo: Some(pseudo),
        true_exps,
        stats: RunStats { cost, repairs, seed: None, mode: Some(opts.mode) },
    })
}

/// Whether `Π f_i^{col_i}` is the minimal annihilator of `e_j`: it kills
/// `e_j`, and dropping one power of any present factor does not.
pub fn verify_column<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    j: usize,
    col: &[usize],
) -> bool {
    if col.len() != factors.len() || j >= a.dim() {
        return false;
    }
    let ctx = Context { k: k.clone(), a, factors };
    let Ok(v) = ctx.apply_column(j, col) else { return false };
    if !v.is_zero(k) {
        return false;
    }
    (0..col.len()).filter(|&i| col[i] > 0).all(|i| {
        let mut lowered = col.to_vec();
        lowered[i] -= 1;
        ctx.apply_column(j, &lowered).is_ok_and(|w| !w.is_zero(k))
    })
}

/// Minimal polynomial of `A` as the lcm of the unit annihilators.
pub fn minimal_polynomial<E: Clone + PartialEq>(report: &AnnihilatorReport<E>) -> FactoredPoly<E> {
    lcm_of_factored(&report.true_exps.columns(), &report.factors)
}

/// Whether `Π f_i^{exps_i}` annihilates every unit vector while each
/// lowered exponent fails on some unit vector.
pub fn verify_minimal_polynomial<F: Field>(
    k: &F,
    a: &DenseMatrix<F::Elem>,
    factors: &FactoredPoly<F::Elem>,
    exps: &[usize],
) -> bool {
    if exps.len() != factors.len() {
        return false;
    }
    let ctx = Context { k: k.clone(), a, factors };
    let kills_all = |e: &[usize]| (0..a.dim()).all(|j| ctx.apply_column(j, e).is_ok_and(|v| v.is_zero(k)));
    kills_all(exps)
        && (0..exps.len()).filter(|&i| exps[i] > 0).all(|i| {
            let mut lowered = exps.to_vec();
            lowered[i] -= 1;
            !kills_all(&lowered)
        })
}
