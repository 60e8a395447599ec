//! Dense square matrices over a field context, the Horner evaluation kernels
//! `f(A)·v` and `w·f(A)`, and the characteristic polynomial.
//!
//! Polynomials in `A` are never formed as matrices: every evaluation goes
//! through the kernels, which cost `deg f` matrix-vector products plus
//! `deg f` scaled additions.

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::polynomials::Poly;

/// A column vector, acted on from the left by a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColVector<E>(pub Vec<E>);

/// A row vector, acted on from the right by a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowVector<E>(pub Vec<E>);

macro_rules! vector_common {
    ($name:ident, $other:ident) => {
        impl<E: Clone> $name<E> {
            pub fn zeros<F: Field<Elem = E>>(k: &F, n: usize) -> Self {
                Self(vec![k.zero(); n])
            }

            /// The `j`-th standard basis vector (0-based).
            pub fn unit<F: Field<Elem = E>>(k: &F, n: usize, j: usize) -> Self {
                let mut v = vec![k.zero(); n];
                v[j] = k.one();
                Self(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[E] {
                &self.0
            }

            pub fn is_zero<F: Field<Elem = E>>(&self, k: &F) -> bool {
                self.0.iter().all(|x| k.is_zero(x))
            }

            pub fn transpose(self) -> $other<E> {
                $other(self.0)
            }

            pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
                Self(k.scale(c, &self.0))
            }

            pub fn add<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| k.add(a, b)).collect())
            }
        }
    };
}

vector_common!(ColVector, RowVector);
vector_common!(RowVector, ColVector);

/// Row-major `n × n` matrix. A column-major copy is kept alongside so both
/// multiplication sides read contiguous memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix<E> {
    n: usize,
    rows: Vec<E>,
    cols: Vec<E>,
}

impl<E: Clone> DenseMatrix<E> {
    /// Builds a matrix from `n²` row-major entries, checking that each is a
    /// canonical element of `k`.
    pub fn from_rows<F: Field<Elem = E>>(k: &F, n: usize, entries: Vec<E>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let rows = entries.iter().map(|e| k.canonicalize(e)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_canonical(n, rows))
    }

    fn from_canonical(n: usize, rows: Vec<E>) -> Self {
        let mut cols = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                cols.push(rows[i * n + j].clone());
            }
        }
        Self { n, rows, cols }
    }

    pub fn from_fn<F: Field<Elem = E>>(_k: &F, n: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rows.push(f(i, j));
            }
        }
        Self::from_canonical(n, rows)
    }

    pub fn from_i64s<F: Field<Elem = E>>(k: &F, n: usize, entries: &[i64]) -> Result<Self> {
        Self::from_rows(k, n, entries.iter().map(|&v| k.from_i64(v)).collect())
    }

    pub fn identity<F: Field<Elem = E>>(k: &F, n: usize) -> Self {
        Self::from_fn(k, n, |i, j| if i == j { k.one() } else { k.zero() })
    }

    pub fn diagonal<F: Field<Elem = E>>(k: &F, diag: &[E]) -> Self {
        Self::from_fn(k, diag.len(), |i, j| if i == j { diag[i].clone() } else { k.zero() })
    }

    /// Block-diagonal assembly.
    pub fn block_diagonal<F: Field<Elem = E>>(k: &F, blocks: &[Self]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut rows = vec![k.zero(); n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    rows[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        Self::from_canonical(n, rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> &[E] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[E] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        Self { n: self.n, rows: self.cols.clone(), cols: self.rows.clone() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(Self::from_fn(k, self.n, |i, j| k.dot(self.row(i), other.col(j))))
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| k.add(a, b)).collect();
        Ok(Self::from_canonical(self.n, rows))
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        Self::from_canonical(self.n, k.scale(c, &self.rows))
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.rows.iter().all(|x| k.is_zero(x))
    }

    pub fn mul_col<F: Field<Elem = E>>(&self, k: &F, v: &ColVector<E>) -> Result<ColVector<E>> {
        self.check_dim(v.len())?;
        Ok(ColVector((0..self.n).map(|i| k.dot(self.row(i), &v.0)).collect()))
    }

    pub fn mul_row<F: Field<Elem = E>>(&self, k: &F, w: &RowVector<E>) -> Result<RowVector<E>> {
        self.check_dim(w.len())?;
        Ok(RowVector((0..self.n).map(|j| k.dot(&w.0, self.col(j))).collect()))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found });
        }
        Ok(())
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse<F: Field<Elem = E>>(&self, k: &F) -> Option<Self> {
        let n = self.n;
        let w = 2 * n;
        let mut aug = vec![k.zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                aug[i * w + j] = self.get(i, j).clone();
            }
            aug[i * w + n + i] = k.one();
        }
        for c in 0..n {
            let pivot = (c..n).find(|&r| !k.is_zero(&aug[r * w + c]))?;
            if pivot != c {
                for j in 0..w {
                    aug.swap(pivot * w + j, c * w + j);
                }
            }
            let inv = k.inv(&aug[c * w + c]).expect("nonzero pivot");
            for j in 0..w {
                aug[c * w + j] = k.mul(&aug[c * w + j], &inv);
            }
            let pivot_row: Vec<E> = aug[c * w..(c + 1) * w].to_vec();
            for r in 0..n {
                if r == c || k.is_zero(&aug[r * w + c]) {
                    continue;
                }
                let factor = k.neg(&aug[r * w + c]);
                k.axpy(&mut aug[r * w..(r + 1) * w], &factor, &pivot_row);
            }
        }
        Some(Self::from_fn(k, n, |i, j| aug[i * w + n + j].clone()))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant<F: Field<Elem = E>>(&self, k: &F) -> E {
        let n = self.n;
        let mut m = self.rows.clone();
        let mut det = k.one();
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| !k.is_zero(&m[r * n + c])) else {
                return k.zero();
            };
            if pivot != c {
                for j in 0..n {
                    m.swap(pivot * n + j, c * n + j);
                }
                det = k.neg(&det);
            }
            det = k.mul(&det, &m[c * n + c]);
            let inv = k.inv(&m[c * n + c]).expect("nonzero pivot");
            let pivot_row: Vec<E> = m[c * n..(c + 1) * n].to_vec();
            for r in c + 1..n {
                if k.is_zero(&m[r * n + c]) {
                    continue;
                }
                let factor = k.neg(&k.mul(&m[r * n + c], &inv));
                k.axpy(&mut m[r * n..(r + 1) * n], &factor, &pivot_row);
            }
        }
        det
    }
}

/// `f(A)·v` by Horner's rule.
pub fn matrix_vector_horner<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    a: &DenseMatrix<F::Elem>,
    v: &ColVector<F::Elem>,
) -> Result<ColVector<F::Elem>> {
    a.check_dim(v.len())?;
    let coeffs = f.coeffs();
    let Some((lead, rest)) = coeffs.split_last() else {
        return Ok(ColVector::zeros(k, v.len()));
    };
    let mut y = v.scale(k, lead);
    for c in rest.iter().rev() {
        y = a.mul_col(k, &y)?;
        k.axpy(&mut y.0, c, &v.0);
    }
    Ok(y)
}

/// `w·f(A)` by Horner's rule.
pub fn vector_matrix_horner<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    a: &DenseMatrix<F::Elem>,
    w: &RowVector<F::Elem>,
) -> Result<RowVector<F::Elem>> {
    a.check_dim(w.len())?;
    let coeffs = f.coeffs();
    let Some((lead, rest)) = coeffs.split_last() else {
        return Ok(RowVector::zeros(k, w.len()));
    };
    let mut y = w.scale(k, lead);
    for c in rest.iter().rev() {
        y = a.mul_row(k, &y)?;
        k.axpy(&mut y.0, c, &w.0);
    }
    Ok(y)
}

/// `f(A)^times · v` by repeated Horner applications of `f`.
pub fn apply_power_col<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    a: &DenseMatrix<F::Elem>,
    v: &ColVector<F::Elem>,
    times: usize,
) -> Result<ColVector<F::Elem>> {
    let mut y = v.clone();
    for _ in 0..times {
        y = matrix_vector_horner(k, f, a, &y)?;
    }
    Ok(y)
}

/// `w · f(A)^times` by repeated Horner applications of `f`.
pub fn apply_power_row<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    a: &DenseMatrix<F::Elem>,
    w: &RowVector<F::Elem>,
    times: usize,
) -> Result<RowVector<F::Elem>> {
    let mut y = w.clone();
    for _ in 0..times {
        y = vector_matrix_horner(k, f, a, &y)?;
    }
    Ok(y)
}

/// `det(λI − A)` by the division-free Samuelson–Berkowitz recurrence over the
/// leading principal submatrices.
///
/// With `A_{k+1} = [[A_k, c], [r, a]]` and `p_k = Σ c_t λ^t`,
/// `p_{k+1} = (λ − a) p_k − Σ_j λ^j Σ_i c_{i+j+1} (r A_k^i c)`.
pub fn char_poly<F: Field>(k: &F, a: &DenseMatrix<F::Elem>) -> Poly<F::Elem> {
    let n = a.dim();
    let mut p = Poly::one(k);
    for s in 0..n {
        // Column above and row left of the new diagonal entry.
        let col: Vec<_> = (0..s).map(|i| a.get(i, s).clone()).collect();
        let row = &a.row(s)[..s];
        let diag = a.get(s, s);

        let mut krylov = Vec::with_capacity(s);
        let mut t = col;
        for i in 0..s {
            krylov.push(k.dot(row, &t));
            if i + 1 < s {
                t = (0..s).map(|r| k.dot(&a.row(r)[..s], &t)).collect();
            }
        }

        let pc = p.coeffs();
        let correction: Vec<_> = (0..s)
            .map(|j| {
                let terms: Vec<_> = (0..s - j).map(|i| pc[i + j + 1].clone()).collect();
                k.dot(&terms, &krylov[..s - j])
            })
            .collect();
        let shifted = Poly::x(k).mul(k, &p);
        p = shifted
            .sub(k, &p.scale(k, diag))
            .sub(k, &Poly::new(k, correction));
    }
    p
}
