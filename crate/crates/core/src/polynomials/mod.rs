//! Dense univariate polynomials over a field context, and irreducible
//! factorization.

mod finite;
mod rational;

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{Field, PrimeField, Rationals};

pub use finite::is_irreducible_mod_p;
pub use rational::integer_content_form;

/// Coefficient `i` multiplies `λ^i`. Trailing zeros are always stripped, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Builds a polynomial from ascending coefficients, stripping trailing zeros.
    pub fn new<F: Field<Elem = E>>(k: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s<F: Field<Elem = E>>(k: &F, coeffs: &[i64]) -> Self {
        Self::new(k, coeffs.iter().map(|&c| k.from_i64(c)).collect())
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, c: E) -> Self {
        Self::new(k, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Self { coeffs: vec![k.one()] }
    }

    /// `λ`.
    pub fn x<F: Field<Elem = E>>(k: &F) -> Self {
        Self { coeffs: vec![k.zero(), k.one()] }
    }

    /// `λ - c`.
    pub fn linear<F: Field<Elem = E>>(k: &F, c: &E) -> Self {
        Self { coeffs: vec![k.without_counter().neg(c), k.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for sizing.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.leading().is_some_and(|c| k.is_one(c))
    }

    pub fn is_one<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.coeffs.len() == 1 && k.is_one(&self.coeffs[0])
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(k, coeffs)
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect() }
    }

    pub fn sub<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => k.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => k.neg(b),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(k, coeffs)
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        if k.is_zero(c) {
            return Self::zero();
        }
        Self { coeffs: k.scale(c, &self.coeffs) }
    }

    pub fn mul<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            k.axpy(&mut out[i..i + other.coeffs.len()], a, &other.coeffs);
        }
        Self::new(k, out)
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: &F, e: usize) -> Self {
        let mut acc = Self::one(k);
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Quotient and remainder with `self = q·divisor + r`, `deg r < deg divisor`.
    pub fn divrem<F: Field<Elem = E>>(&self, k: &F, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = k.inv(divisor.leading().expect("nonzero"))?;
        if self.coeffs.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![k.zero(); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + db];
            if k.is_zero(c) {
                continue;
            }
            let t = k.mul(c, &lead_inv);
            let neg_t = k.neg(&t);
            k.axpy(&mut rem[i..=i + db], &neg_t, &divisor.coeffs);
            quot[i] = t;
        }
        rem.truncate(db);
        Ok((Self::new(k, quot), Self::new(k, rem)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, k: &F, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(k, divisor)?.1)
    }

    /// Quotient of an exact division.
    pub fn exact_div<F: Field<Elem = E>>(&self, k: &F, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(k, divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidPolynomial("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(c) if k.is_one(c) => self.clone(),
            Some(c) => self.scale(k, &k.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(k: &F, a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn xgcd<F: Field<Elem = E>>(k: &F, a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(k, &r1).expect("nonzero divisor");
            let s = s0.sub(k, &q.mul(k, &s1));
            let t = t0.sub(k, &q.mul(k, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = k.inv(&lc).expect("nonzero");
                (r0.scale(k, &inv), s0.scale(k, &inv), t0.scale(k, &inv))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
            .collect();
        Self::new(k, coeffs)
    }

    pub fn eval<F: Field<Elem = E>>(&self, k: &F, x: &E) -> E {
        self.coeffs.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    pub fn mulmod<F: Field<Elem = E>>(&self, k: &F, other: &Self, modulus: &Self) -> Self {
        self.mul(k, other).rem(k, modulus).expect("nonzero modulus")
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod<F: Field<Elem = E>>(&self, k: &F, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(k, modulus).expect("nonzero modulus");
        let mut acc = Self::one(k).rem(k, modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(k, &base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(k, &base, modulus);
            }
        }
        acc
    }

    /// Degree first, then negated coefficients from the top down, so linear
    /// factors `λ − c` sort by `c`.
    pub fn cmp_canonical<F: Field<Elem = E>>(k: &F, a: &Self, b: &Self) -> Ordering {
        let k = &k.without_counter();
        a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| {
            a.coeffs
                .iter()
                .rev()
                .zip(b.coeffs.iter().rev())
                .map(|(x, y)| k.cmp_elements(&k.neg(x), &k.neg(y)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// `f_1^{m_1} ⋯ f_q^{m_q}` with monic, pairwise distinct factors. The list
/// order fixes the factor index used by exponent tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPoly<E> {
    factors: Vec<(Poly<E>, usize)>,
}

impl<E: Clone + PartialEq> FactoredPoly<E> {
    /// Wraps a factor list as given. Multiplicities must be positive and
    /// factors monic and distinct.
    pub fn new<F: Field<Elem = E>>(k: &F, factors: Vec<(Poly<E>, usize)>) -> Result<Self> {
        for (i, (f, m)) in factors.iter().enumerate() {
            if *m == 0 {
                return Err(Error::InvalidPolynomial("factor multiplicity must be positive".into()));
            }
            if !f.is_monic(k) || f.degree() == Some(0) {
                return Err(Error::InvalidPolynomial("factors must be monic of positive degree".into()));
            }
            if factors[..i].iter().any(|(g, _)| g == f) {
                return Err(Error::InvalidPolynomial("factors must be distinct".into()));
            }
        }
        Ok(Self { factors })
    }

    /// Sorts factors by degree, then lexicographically by coefficients.
    pub fn sorted<F: Field<Elem = E>>(mut self, k: &F) -> Self {
        self.factors.sort_by(|(a, _), (b, _)| Poly::cmp_canonical(k, a, b));
        self
    }

    pub fn factors(&self) -> &[(Poly<E>, usize)] {
        &self.factors
    }

    /// Number of distinct factors, `q`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, i: usize) -> &Poly<E> {
        &self.factors[i].0
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.factors[i].1
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, m)| *m).collect()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(f, m)| f.degree_or_zero() * m).sum()
    }

    pub fn expand<F: Field<Elem = E>>(&self, k: &F) -> Poly<E> {
        self.factors
            .iter()
            .fold(Poly::one(k), |acc, (f, m)| acc.mul(k, &f.pow(k, *m)))
    }

    /// Same factor list with new exponents; zero exponents are dropped.
    pub fn with_exponents(&self, exps: &[usize]) -> Self {
        assert_eq!(exps.len(), self.factors.len());
        Self {
            factors: self
                .factors
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|((f, _), &e)| (f.clone(), e))
                .collect(),
        }
    }
}

/// Yun's squarefree decomposition of a monic polynomial: pairs
/// `(part, multiplicity)` with `f = Π part^multiplicity`.
///
/// Valid in characteristic zero and for `p > deg f`.
pub fn squarefree_decomposition<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    let deg = f.degree().ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
    if !f.is_monic(k) {
        return Err(Error::InvalidPolynomial("squarefree decomposition needs a monic input".into()));
    }
    let p = k.characteristic();
    if p != 0 && p <= deg as u64 {
        return Err(Error::SmallCharacteristic { p, degree: deg });
    }
    let mut out = Vec::new();
    if deg == 0 {
        return Ok(out);
    }
    let df = f.derivative(k);
    let a0 = Poly::gcd(k, f, &df);
    let mut b = f.exact_div(k, &a0)?;
    let mut c = df.exact_div(k, &a0)?;
    let mut d = c.sub(k, &b.derivative(k));
    let mut i = 1;
    while b.degree() != Some(0) {
        let a = Poly::gcd(k, &b, &d);
        b = b.exact_div(k, &a)?;
        c = d.exact_div(k, &a)?;
        d = c.sub(k, &b.derivative(k));
        if a.degree().is_some_and(|g| g > 0) {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Exponent-wise maximum of unit annihilator columns: the lcm of
/// `Π_i f_i^{col[i]}` over all columns.
pub fn lcm_of_factored<E: Clone + PartialEq>(columns: &[Vec<usize>], factors: &FactoredPoly<E>) -> FactoredPoly<E> {
    let q = factors.len();
    let mut exps = vec![0usize; q];
    for col in columns {
        assert_eq!(col.len(), q, "exponent column length must equal the factor count");
        for (e, &c) in exps.iter_mut().zip(col) {
            *e = (*e).max(c);
        }
    }
    factors.with_exponents(&exps)
}

#[derive(Debug, Clone)]
pub struct FactorOptions {
    /// Seeds the random splitting polynomials of equal-degree factorization.
    pub seed: u64,
    /// Largest degree factored over the rationals.
    pub rational_degree_cap: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self { seed: 0, rational_degree_cap: 64 }
    }
}

/// Fields over which the crate can factor polynomials.
pub trait Factorize: Field {
    /// Splits a monic squarefree polynomial of positive degree into its
    /// monic irreducible factors.
    fn split_squarefree(
        &self,
        f: &Poly<Self::Elem>,
        opts: &FactorOptions,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Poly<Self::Elem>>>;

    /// Irreducibility test for a monic polynomial of positive degree.
    fn is_irreducible(&self, f: &Poly<Self::Elem>) -> Result<bool>;
}

impl Factorize for PrimeField {
    fn split_squarefree(
        &self,
        f: &Poly<Self::Elem>,
        _opts: &FactorOptions,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Poly<Self::Elem>>> {
        Ok(finite::split_squarefree(self, f, rng))
    }

    fn is_irreducible(&self, f: &Poly<Self::Elem>) -> Result<bool> {
        Ok(finite::is_irreducible_mod_p(self, f))
    }
}

impl Factorize for Rationals {
    fn split_squarefree(
        &self,
        f: &Poly<Self::Elem>,
        opts: &FactorOptions,
        _rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Poly<Self::Elem>>> {
        rational::split_squarefree(self, f, opts)
    }

    fn is_irreducible(&self, f: &Poly<Self::Elem>) -> Result<bool> {
        if !Poly::gcd(self, f, &f.derivative(self)).is_one(self) {
            return Ok(false);
        }
        Ok(rational::split_squarefree(self, f, &FactorOptions::default())?.len() == 1)
    }
}

/// Irreducible factorization of a monic polynomial, factors in canonical
/// order.
pub fn factor_irreducible<F: Factorize>(
    k: &F,
    f: &Poly<F::Elem>,
    opts: &FactorOptions,
) -> Result<FactoredPoly<F::Elem>> {
    // Factorization is plumbing, not part of any measured run.
    let k = &k.without_counter();
    let deg = f.degree().ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
    if !f.is_monic(k) {
        return Err(Error::InvalidPolynomial("factorization needs a monic input".into()));
    }
    if k.characteristic() == 0 && deg > opts.rational_degree_cap {
        return Err(Error::FactorizationTooLarge { degree: deg, cap: opts.rational_degree_cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(k, f)? {
        for g in k.split_squarefree(&part, opts, &mut rng)? {
            factors.push((g, mult));
        }
    }
    Ok(FactoredPoly::new(k, factors)?.sorted(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Residue;
    use proptest::prelude::*;
    use rand::Rng;

    fn qp(c: &[i64]) -> Poly<num_rational::BigRational> {
        Poly::from_i64s(&Rationals::new(), c)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let k = Rationals::new();
        let z = Poly::new(&k, vec![k.zero(), k.zero()]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(qp(&[5]).degree(), Some(0));
    }

    #[test]
    fn gcd_of_shared_root() {
        let k = Rationals::new();
        // gcd(λ²−1, λ²−2λ+1) = λ−1
        assert_eq!(Poly::gcd(&k, &qp(&[-1, 0, 1]), &qp(&[1, -2, 1])), qp(&[-1, 1]));
        assert!(Poly::gcd(&k, &Poly::zero(), &Poly::zero()).is_zero());
    }

    #[test]
    fn divrem_by_monomial() {
        let k = Rationals::new();
        let (q, r) = qp(&[0, 0, 0, 1]).divrem(&k, &qp(&[0, 1])).unwrap();
        assert_eq!(q, qp(&[0, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(qp(&[1]).divrem(&k, &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn xgcd_bezout() {
        let k = PrimeField::new(101).unwrap();
        let a = Poly::from_i64s(&k, &[3, 0, 1, 7]);
        let b = Poly::from_i64s(&k, &[1, 5, 2]);
        let (g, s, t) = Poly::xgcd(&k, &a, &b);
        assert_eq!(s.mul(&k, &a).add(&k, &t.mul(&k, &b)), g);
        assert_eq!(g, Poly::gcd(&k, &a, &b));
    }

    #[test]
    fn squarefree_of_repeated_root() {
        let k = Rationals::new();
        // (λ−1)²(λ−2)
        let f = qp(&[-1, 1]).pow(&k, 2).mul(&k, &qp(&[-2, 1]));
        let parts = squarefree_decomposition(&k, &f).unwrap();
        assert_eq!(parts, vec![(qp(&[-2, 1]), 1), (qp(&[-1, 1]), 2)]);
        let sqf = qp(&[1, 0, 1]);
        assert_eq!(squarefree_decomposition(&k, &sqf).unwrap(), vec![(sqf.clone(), 1)]);
    }

    #[test]
    fn squarefree_guards_small_characteristic() {
        let k = PrimeField::new(5).unwrap();
        let f = Poly::from_i64s(&k, &[0, 0, 0, 0, 0, 1]);
        assert_eq!(
            squarefree_decomposition(&k, &f),
            Err(Error::SmallCharacteristic { p: 5, degree: 5 })
        );
        assert!(matches!(
            factor_irreducible(&k, &f, &FactorOptions::default()),
            Err(Error::SmallCharacteristic { .. })
        ));
    }

    #[test]
    fn cyclotomic_factorization_over_q() {
        let k = Rationals::new();
        let f = factor_irreducible(&k, &qp(&[-1, 0, 0, 0, 1]), &FactorOptions::default()).unwrap();
        assert_eq!(
            f.factors(),
            &[(qp(&[1, 1]), 1), (qp(&[-1, 1]), 1), (qp(&[1, 0, 1]), 1)]
        );
    }

    #[test]
    fn x2_plus_1_irreducible_mod_7() {
        let k = PrimeField::new(7).unwrap();
        let f = Poly::from_i64s(&k, &[1, 0, 1]);
        let fac = factor_irreducible(&k, &f, &FactorOptions::default()).unwrap();
        assert_eq!(fac.factors(), &[(f.clone(), 1)]);
        assert!(k.is_irreducible(&f).unwrap());
        // ... but splits mod 5.
        let k5 = PrimeField::new(5).unwrap();
        let g = Poly::from_i64s(&k5, &[1, 0, 1]);
        assert_eq!(factor_irreducible(&k5, &g, &FactorOptions::default()).unwrap().len(), 2);
    }

    #[test]
    fn rational_cap_is_enforced() {
        let k = Rationals::new();
        let mut c = vec![0i64; 66];
        c[0] = 1;
        c[65] = 1;
        let f = qp(&c);
        assert_eq!(
            factor_irreducible(&k, &f, &FactorOptions::default()),
            Err(Error::FactorizationTooLarge { degree: 65, cap: 64 })
        );
    }

    #[test]
    fn rational_factorization_with_fractions_and_multiplicity() {
        let k = Rationals::new();
        // (λ − 1/2)^2 (λ^2 − 2) (λ^3 + 3/4 λ + 5)
        let a = Poly::new(&k, vec![crate::fields::parse_rational("-1/2").unwrap(), k.one()]);
        let b = qp(&[-2, 0, 1]);
        let c = Poly::new(
            &k,
            vec![k.from_i64(5), crate::fields::parse_rational("3/4").unwrap(), k.zero(), k.one()],
        );
        let f = a.pow(&k, 2).mul(&k, &b).mul(&k, &c);
        let fac = factor_irreducible(&k, &f, &FactorOptions::default()).unwrap();
        assert_eq!(fac.factors(), &[(a, 2), (b, 1), (c, 1)]);
        assert_eq!(fac.expand(&k), f);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // λ^4 − 10λ^2 + 1 is irreducible over Q but splits modulo every prime.
        let k = Rationals::new();
        let f = qp(&[1, 0, -10, 0, 1]);
        let fac = factor_irreducible(&k, &f, &FactorOptions::default()).unwrap();
        assert_eq!(fac.factors(), &[(f.clone(), 1)]);
        // λ^4 + 4 = (λ^2 + 2λ + 2)(λ^2 − 2λ + 2)
        let g = qp(&[4, 0, 0, 0, 1]);
        let fac = factor_irreducible(&k, &g, &FactorOptions::default()).unwrap();
        assert_eq!(fac.factors(), &[(qp(&[2, 2, 1]), 1), (qp(&[2, -2, 1]), 1)]);
    }

    #[test]
    fn lcm_takes_exponentwise_max() {
        let k = Rationals::new();
        let factors = FactoredPoly::new(&k, vec![(qp(&[-1, 1]), 1), (qp(&[-2, 1]), 1)]).unwrap();
        let l = lcm_of_factored(&[vec![1, 0], vec![0, 1]], &factors);
        assert_eq!(l.expand(&k), qp(&[2, -3, 1]));
        let single = lcm_of_factored(&[vec![0, 1]], &factors);
        assert_eq!(single.factors(), &[(qp(&[-2, 1]), 1)]);
    }

    #[test]
    fn factored_poly_validation() {
        let k = Rationals::new();
        assert!(FactoredPoly::new(&k, vec![(qp(&[1, 2]), 1)]).is_err());
        assert!(FactoredPoly::new(&k, vec![(qp(&[1, 1]), 0)]).is_err());
        assert!(FactoredPoly::new(&k, vec![(qp(&[1, 1]), 1), (qp(&[1, 1]), 2)]).is_err());
    }

    fn random_poly(k: &PrimeField, rng: &mut ChaCha8Rng, deg: usize) -> Poly<Residue> {
        let mut c: Vec<_> = (0..deg).map(|_| k.random_element(rng)).collect();
        c.push(k.one());
        Poly::new(k, c)
    }

    #[test]
    fn mul_then_divide_round_trips() {
        let k = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let f = { let d = rng.random_range(0..12); random_poly(&k, &mut rng, d) };
            let mut g = { let d = rng.random_range(0..8); random_poly(&k, &mut rng, d) };
            g = g.scale(&k, &k.from_i64(rng.random_range(1..32003)));
            let (q, r) = f.mul(&k, &g).divrem(&k, &g).unwrap();
            assert_eq!(q, f);
            assert!(r.is_zero());
        }
    }

    #[test]
    fn squarefree_recombines_over_large_prime() {
        let k = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut f = Poly::one(&k);
            for _ in 0..rng.random_range(1..4) {
                let g = { let d = rng.random_range(1..5); random_poly(&k, &mut rng, d) };
                f = f.mul(&k, &g.pow(&k, rng.random_range(1..4)));
            }
            let parts = squarefree_decomposition(&k, &f).unwrap();
            let back = parts.iter().fold(Poly::one(&k), |acc, (p, m)| acc.mul(&k, &p.pow(&k, *m)));
            assert_eq!(back, f);
            for (p, _) in &parts {
                assert!(Poly::gcd(&k, p, &p.derivative(&k)).is_one(&k));
            }
            let sqf = Poly::gcd(&k, &f, &f.derivative(&k)).is_one(&k);
            assert_eq!(sqf, parts.iter().all(|(_, m)| *m == 1));
        }
    }

    /// Irreducibility by exhaustive search for a monic divisor of degree
    /// at most `deg/2`; only for tiny fields.
    fn brute_force_irreducible(p: u64, f: &Poly<Residue>) -> bool {
        let k = PrimeField::new(p).unwrap();
        let n = f.degree().unwrap();
        for d in 1..=n / 2 {
            let total = p.pow(d as u32);
            for idx in 0..total {
                let mut c = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    c.push(k.from_i64((t % p) as i64));
                    t /= p;
                }
                c.push(k.one());
                let g = Poly::new(&k, c);
                if f.rem(&k, &g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_test_agrees_with_brute_force_mod_5() {
        let k = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let f = { let d = rng.random_range(1..7); random_poly(&k, &mut rng, d) };
            assert_eq!(k.is_irreducible(&f).unwrap(), brute_force_irreducible(5, &f), "{f:?}");
        }
    }

    #[test]
    fn random_factorizations_over_gf32003() {
        let k = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..500 {
            let deg = rng.random_range(1..=40);
            let f = random_poly(&k, &mut rng, deg);
            let opts = FactorOptions { seed: case, ..Default::default() };
            let fac = factor_irreducible(&k, &f, &opts).unwrap();
            assert_eq!(fac.expand(&k), f);
            assert_eq!(fac.degree(), deg);
            for (g, _) in fac.factors() {
                assert!(g.is_monic(&k));
                assert!(is_irreducible_mod_p(&k, g));
            }
        }
    }

    #[test]
    fn factorization_is_deterministic() {
        let k = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_poly(&k, &mut rng, 30);
        let a = factor_irreducible(&k, &f, &FactorOptions { seed: 4, ..Default::default() }).unwrap();
        let b = factor_irreducible(&k, &f, &FactorOptions { seed: 4, ..Default::default() }).unwrap();
        let c = factor_irreducible(&k, &f, &FactorOptions { seed: 9, ..Default::default() }).unwrap();
        assert_eq!(a, b);
        // Canonical ordering makes the result seed independent.
        assert_eq!(a, c);
    }

    #[test]
    fn random_products_over_q_factor_back() {
        let k = Rationals::new();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let mut factors: Vec<Poly<_>> = Vec::new();
            let mut f = Poly::one(&k);
            for _ in 0..rng.random_range(1..4) {
                let d = rng.random_range(1..4);
                let mut c: Vec<i64> = (0..d).map(|_| rng.random_range(-6..=6)).collect();
                c.push(1);
                let g = qp(&c);
                let m = rng.random_range(1..3);
                f = f.mul(&k, &g.pow(&k, m));
                factors.push(g);
            }
            let fac = factor_irreducible(&k, &f, &FactorOptions::default()).unwrap();
            assert_eq!(fac.expand(&k), f);
            for (g, _) in fac.factors() {
                assert!(g.is_monic(&k));
                // Every computed factor divides one of the generating pieces,
                // and a degree-1 piece must come back verbatim.
                assert!(factors.iter().any(|h| h.rem(&k, g).unwrap().is_zero()));
            }
            for h in factors.iter().filter(|h| h.degree() == Some(1)) {
                assert!(fac.factors().iter().any(|(g, _)| g == h));
            }
        }
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in prop::collection::vec(-20i64..20, 0..8), b in prop::collection::vec(-20i64..20, 0..8)) {
            let k = Rationals::new();
            let (pa, pb) = (qp(&a), qp(&b));
            let g = Poly::gcd(&k, &pa, &pb);
            if !g.is_zero() {
                prop_assert!(pa.rem(&k, &g).unwrap().is_zero());
                prop_assert!(pb.rem(&k, &g).unwrap().is_zero());
            }
        }
    }
}
