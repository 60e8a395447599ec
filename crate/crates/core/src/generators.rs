//! Test matrices with known annihilator structure.
//!
//! A block `(f, k)` is the companion matrix of `f^k`. A block-diagonal
//! assembly of such blocks has a known characteristic polynomial, minimal
//! polynomial and unit annihilator table. An optional random similarity
//! transform hides the block structure but keeps both polynomials.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annihilators::{ExponentTable, TableKind};
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::matrices::DenseMatrix;
use crate::polynomials::{FactoredPoly, Factorize, Poly};

const SIMILARITY_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<E> {
    /// Monic irreducible.
    pub f: Poly<E>,
    /// Exponent `k ≥ 1`; the block is the companion matrix of `f^k`.
    pub power: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Similarity {
    #[default]
    None,
    /// Conjugation by a random unit-determinant matrix drawn from the seed.
    /// Over the rationals the matrix is integral with an integral inverse.
    RandomUnimodular(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec<E> {
    pub blocks: Vec<Block<E>>,
    pub similarity: Similarity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundTruth {
    /// Exact unit annihilator exponents (block-diagonal matrices).
    Columns(ExponentTable),
    /// Conjugated matrices: only the minimal polynomial is known.
    MinPolyOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembled<E> {
    pub matrix: DenseMatrix<E>,
    /// Factorization of the characteristic polynomial in canonical order.
    pub factors: FactoredPoly<E>,
    /// Exponents of the minimal polynomial, aligned with `factors`.
    pub minpoly_exponents: Vec<usize>,
    pub truth: GroundTruth,
}

impl<E: Clone + PartialEq> Assembled<E> {
    pub fn minimal_poly(&self) -> FactoredPoly<E> {
        self.factors.with_exponents(&self.minpoly_exponents)
    }
}

/// Companion matrix with ones on the subdiagonal and `−c_0,…,−c_{d−1}` in
/// the last column.
pub fn companion<F: Field>(k: &F, f: &Poly<F::Elem>) -> Result<DenseMatrix<F::Elem>> {
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic(k) => d,
        _ => return Err(Error::InvalidBlock("companion matrix needs a monic polynomial of positive degree".into())),
    };
    let c = f.coeffs();
    Ok(DenseMatrix::from_fn(k, d, |i, j| {
        if j == d - 1 {
            k.neg(&c[i])
        } else if i == j + 1 {
            k.one()
        } else {
            k.zero()
        }
    }))
}

/// Companion matrix of `f^power`, with the exponent of `f` in the unit
/// annihilator of each column.
///
/// Column `t` (0-based) is `λ^t` applied to the cyclic vector `e_0`, so its
/// annihilator is `f^power / gcd(f^power, λ^t)`.
pub fn jordan_like_block<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    power: usize,
) -> Result<(DenseMatrix<F::Elem>, Vec<usize>)> {
    if power == 0 {
        return Err(Error::InvalidBlock("block exponent must be at least 1".into()));
    }
    let g = f.pow(k, power);
    let matrix = companion(k, &g)?;
    let is_lambda = *f == Poly::x(k);
    let pattern = (0..matrix.dim()).map(|t| if is_lambda { power - t.min(power) } else { power }).collect();
    Ok((matrix, pattern))
}

fn check_block<F: Factorize>(k: &F, b: &Block<F::Elem>) -> Result<()> {
    if b.power == 0 {
        return Err(Error::InvalidBlock("block exponent must be at least 1".into()));
    }
    if !b.f.is_monic(k) || b.f.degree().is_none_or(|d| d == 0) {
        return Err(Error::InvalidBlock("block polynomial must be monic of positive degree".into()));
    }
    if !k.is_irreducible(&b.f)? {
        return Err(Error::InvalidBlock("block polynomial is not irreducible".into()));
    }
    Ok(())
}

/// Builds the matrix of `spec` and its ground truth.
pub fn assemble<F: Factorize>(k: &F, spec: &BlockSpec<F::Elem>) -> Result<Assembled<F::Elem>> {
    let k = &k.without_counter();
    for b in &spec.blocks {
        check_block(k, b)?;
    }

    // Distinct block polynomials in canonical order.
    let mut distinct: Vec<Poly<F::Elem>> = Vec::new();
    for b in &spec.blocks {
        if !distinct.contains(&b.f) {
            distinct.push(b.f.clone());
        }
    }
    distinct.sort_by(|a, b| Poly::cmp_canonical(k, a, b));
    let q = distinct.len();
    let index = |f: &Poly<F::Elem>| distinct.iter().position(|g| g == f).expect("registered factor");

    let mut mult = vec![0usize; q];
    let mut minpoly = vec![0usize; q];
    let mut matrices = Vec::new();
    let mut columns = Vec::new();
    for b in &spec.blocks {
        let i = index(&b.f);
        mult[i] += b.power;
        minpoly[i] = minpoly[i].max(b.power);
        let (m, pattern) = jordan_like_block(k, &b.f, b.power)?;
        matrices.push(m);
        for e in pattern {
            let mut col = vec![0; q];
            col[i] = e;
            columns.push(col);
        }
    }
    let factors = FactoredPoly::new(k, distinct.into_iter().zip(mult).collect())?;
    let diag = DenseMatrix::block_diagonal(k, &matrices);

    let (matrix, truth) = match spec.similarity {
        Similarity::None => (diag, GroundTruth::Columns(ExponentTable::from_columns(TableKind::True, q, &columns))),
        Similarity::RandomUnimodular(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, p_inv) = unimodular(k, diag.dim(), &mut rng)?;
            (p.mul(k, &diag)?.mul(k, &p_inv)?, GroundTruth::MinPolyOnly)
        }
    };
    Ok(Assembled { matrix, factors, minpoly_exponents: minpoly, truth })
}

/// A random matrix of determinant one and its inverse.
///
/// In characteristic zero it is a product of `2n` elementary transvections
/// `I ± E_{ab}`, so both it and its inverse are integral. Over GF(p) it is a
/// uniformly random matrix with its first row rescaled to fix the
/// determinant.
#[allow(clippy::type_complexity)]
pub fn unimodular<F: Field>(
    k: &F,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(DenseMatrix<F::Elem>, DenseMatrix<F::Elem>)> {
    if k.characteristic() == 0 {
        let mut p = DenseMatrix::identity(k, n);
        if n >= 2 {
            for _ in 0..2 * n {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                let c = if rng.random_bool(0.5) { k.one() } else { k.neg(&k.one()) };
                let t = DenseMatrix::from_fn(k, n, |i, j| {
                    if i == j {
                        k.one()
                    } else if i == a && j == b {
                        c.clone()
                    } else {
                        k.zero()
                    }
                });
                p = p.mul(k, &t)?;
            }
        }
        let inv = p.inverse(k).ok_or(Error::SingularSimilarity)?;
        return Ok((p, inv));
    }
    for _ in 0..SIMILARITY_ATTEMPTS {
        let mut entries: Vec<F::Elem> = (0..n * n).map(|_| k.random_element(rng)).collect();
        let det = DenseMatrix::from_rows(k, n, entries.clone())?.determinant(k);
        if k.is_zero(&det) {
            continue;
        }
        let scale = k.inv(&det)?;
        for e in entries.iter_mut().take(n) {
            *e = k.mul(e, &scale);
        }
        let p = DenseMatrix::from_rows(k, n, entries)?;
        let inv = p.inverse(k).ok_or(Error::SingularSimilarity)?;
        return Ok((p, inv));
    }
    Err(Error::SingularSimilarity)
}

/// A uniformly random monic irreducible polynomial of the given degree.
pub fn random_irreducible<F: Factorize>(k: &F, degree: usize, rng: &mut ChaCha8Rng) -> Result<Poly<F::Elem>> {
    let k = &k.without_counter();
    loop {
        let mut c: Vec<F::Elem> = (0..degree).map(|_| k.random_element(rng)).collect();
        c.push(k.one());
        let f = Poly::new(k, c);
        if k.is_irreducible(&f)? {
            return Ok(f);
        }
    }
}

/// Shape limits for [`random_block_spec`].
#[derive(Debug, Clone)]
pub struct RandomSpecParams {
    /// Number of distinct factors.
    pub q: usize,
    /// Largest multiplicity of a factor in the characteristic polynomial.
    pub max_mult: usize,
    /// Largest factor degree.
    pub max_degree: usize,
    /// Largest matrix dimension.
    pub max_n: usize,
    pub similarity: Similarity,
}

/// A random spec with `q` distinct factors. Each factor's multiplicity is
/// split into a random partition of block exponents, so the unit
/// annihilators vary across columns.
pub fn random_block_spec<F: Factorize>(
    k: &F,
    params: &RandomSpecParams,
    rng: &mut ChaCha8Rng,
) -> Result<BlockSpec<F::Elem>> {
    if params.q > params.max_n || params.max_mult == 0 || params.max_degree == 0 {
        return Err(Error::InvalidBlock("random spec shape is infeasible".into()));
    }
    let mut factors: Vec<Poly<F::Elem>> = Vec::new();
    let mut budget = params.max_n;
    for remaining in (0..params.q).rev() {
        // Leave room for one linear factor per remaining slot.
        let max_d = params.max_degree.min(budget - remaining);
        let f = loop {
            let d = rng.random_range(1..=max_d);
            let f = random_irreducible(k, d, rng)?;
            if !factors.contains(&f) {
                break f;
            }
        };
        budget -= f.degree_or_zero();
        factors.push(f);
    }
    let mut blocks = Vec::new();
    for f in &factors {
        let d = f.degree_or_zero();
        // One copy of each factor is already paid for.
        let extra = (budget / d).min(params.max_mult - 1);
        let m = 1 + rng.random_range(0..=extra);
        budget -= (m - 1) * d;
        let mut rest = m;
        while rest > 0 {
            let part = rng.random_range(1..=rest);
            blocks.push(Block { f: f.clone(), power: part });
            rest -= part;
        }
    }
    blocks.shuffle(rng);
    Ok(BlockSpec { blocks, similarity: params.similarity })
}
