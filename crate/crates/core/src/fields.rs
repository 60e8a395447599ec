//! Exact field arithmetic over a prime field GF(p) or the rationals.
//!
//! Contexts are immutable after construction. Each arithmetic call on a
//! context with an attached [`OpCounter`] adds one to the field-op total;
//! the bulk helpers [`Field::dot`] and [`Field::axpy`] add exactly what the
//! equivalent sequence of scalar calls would.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrumentation::OpCounter;

/// Runtime description of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Prime(u64),
    Rationals,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime(p) => write!(f, "GF({p})"),
            FieldKind::Rationals => write!(f, "Q"),
        }
    }
}

/// A field context. Elements carry no reference to their context; every
/// operation goes through one.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn kind(&self) -> FieldKind;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn counter(&self) -> Option<&Arc<OpCounter>>;

    /// A copy of this context that reports to `counter`.
    fn with_counter(&self, counter: Arc<OpCounter>) -> Self;

    fn without_counter(&self) -> Self;

    #[inline]
    fn tally(&self, k: u64) {
        if let Some(c) = self.counter() {
            c.add_field_ops(k);
        }
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let b_inv = self.inv(b)?;
        Ok(self.mul(a, &b_inv))
    }

    /// `sum_i a_i b_i`; counts `2len - 1` operations (none when empty).
    fn dot(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Self::Elem {
        debug_assert_eq!(a.len(), b.len());
        let mut terms = a.iter().zip(b);
        let Some((x, y)) = terms.next() else {
            return self.zero();
        };
        let mut acc = self.mul(x, y);
        for (x, y) in terms {
            let t = self.mul(x, y);
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// `y += a x`; counts `2len` operations.
    fn axpy(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem]) {
        debug_assert_eq!(y.len(), x.len());
        for (yi, xi) in y.iter_mut().zip(x) {
            let t = self.mul(a, xi);
            *yi = self.add(yi, &t);
        }
    }

    /// `a x`; counts `len` operations.
    fn scale(&self, a: &Self::Elem, x: &[Self::Elem]) -> Vec<Self::Elem> {
        x.iter().map(|xi| self.mul(a, xi)).collect()
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Parses a decimal integer or an `a/b` fraction.
    fn parse_element(&self, s: &str) -> Result<Self::Elem>;

    fn format_element(&self, a: &Self::Elem) -> String;

    /// Returns the canonical form of `a`, or `ContextMismatch` if `a` is not
    /// a valid representative for this context.
    fn canonicalize(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Total order on canonical representatives (residue order for GF(p),
    /// numeric order for the rationals).
    fn cmp_elements(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Maps an exact rational into this field.
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem>;
}

/// Residue class modulo the context prime, stored as the least
/// nonnegative representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue(u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }
}

/// GF(p) for a prime `2 < p < 2^62`.
#[derive(Clone)]
pub struct PrimeField {
    p: u64,
    counter: Option<Arc<OpCounter>>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

pub const MAX_MODULUS: u64 = 1 << 62;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self { p, counter: None })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Checked import of a residue value.
    pub fn element(&self, v: u64) -> Result<Residue> {
        if v < self.p {
            Ok(Residue(v))
        } else {
            Err(Error::ContextMismatch {
                value: v.to_string(),
                field: format!("GF({})", self.p),
            })
        }
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    pub fn pow(&self, a: Residue, mut e: u64) -> Residue {
        let mut base = a.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        Residue(acc)
    }
}

impl Field for PrimeField {
    type Elem = Residue;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn counter(&self) -> Option<&Arc<OpCounter>> {
        self.counter.as_ref()
    }

    fn with_counter(&self, counter: Arc<OpCounter>) -> Self {
        Self { p: self.p, counter: Some(counter) }
    }

    fn without_counter(&self) -> Self {
        Self { p: self.p, counter: None }
    }

    fn zero(&self) -> Residue {
        Residue(0)
    }

    fn one(&self) -> Residue {
        Residue(1)
    }

    #[inline]
    fn is_zero(&self, a: &Residue) -> bool {
        a.0 == 0
    }

    fn from_i64(&self, v: i64) -> Residue {
        Residue((v as i128).rem_euclid(self.p as i128) as u64)
    }

    #[inline]
    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        self.tally(1);
        let s = a.0 + b.0;
        Residue(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        self.tally(1);
        Residue(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        self.tally(1);
        Residue(self.mulmod(a.0, b.0))
    }

    #[inline]
    fn neg(&self, a: &Residue) -> Residue {
        self.tally(1);
        Residue(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    fn inv(&self, a: &Residue) -> Result<Residue> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        self.tally(1);
        // Extended Euclid on signed 128-bit values.
        let (mut r0, mut r1) = (self.p as i128, a.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Residue(t0.rem_euclid(self.p as i128) as u64))
    }

    fn dot(&self, a: &[Residue], b: &[Residue]) -> Residue {
        debug_assert_eq!(a.len(), b.len());
        if a.is_empty() {
            return Residue(0);
        }
        self.tally(2 * a.len() as u64 - 1);
        let p = self.p as u128;
        let mut acc: u128 = 0;
        // p^2 < 2^124, so eight unreduced products always fit.
        for (chunk_a, chunk_b) in a.chunks(8).zip(b.chunks(8)) {
            for (x, y) in chunk_a.iter().zip(chunk_b) {
                acc += x.0 as u128 * y.0 as u128;
            }
            acc %= p;
        }
        Residue(acc as u64)
    }

    fn axpy(&self, y: &mut [Residue], a: &Residue, x: &[Residue]) {
        debug_assert_eq!(y.len(), x.len());
        self.tally(2 * x.len() as u64);
        let p = self.p as u128;
        for (yi, xi) in y.iter_mut().zip(x) {
            yi.0 = ((yi.0 as u128 + a.0 as u128 * xi.0 as u128) % p) as u64;
        }
    }

    fn scale(&self, a: &Residue, x: &[Residue]) -> Vec<Residue> {
        self.tally(x.len() as u64);
        x.iter().map(|xi| Residue(self.mulmod(a.0, xi.0))).collect()
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Residue {
        Residue(rng.random_range(0..self.p))
    }

    fn parse_element(&self, s: &str) -> Result<Residue> {
        let r = parse_rational(s)?;
        self.from_rational(&r)
    }

    fn format_element(&self, a: &Residue) -> String {
        a.0.to_string()
    }

    fn canonicalize(&self, a: &Residue) -> Result<Residue> {
        self.element(a.0)
    }

    fn cmp_elements(&self, a: &Residue, b: &Residue) -> Ordering {
        a.0.cmp(&b.0)
    }

    fn from_rational(&self, r: &BigRational) -> Result<Residue> {
        let num = Residue(self.reduce_bigint(r.numer()));
        let den = Residue(self.reduce_bigint(r.denom()));
        if den.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let den_inv = self.without_counter().inv(&den)?;
        Ok(Residue(self.mulmod(num.0, den_inv.0)))
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone)]
pub struct Rationals {
    random_bound: u64,
    counter: Option<Arc<OpCounter>>,
}

impl fmt::Debug for Rationals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")
    }
}

impl Default for Rationals {
    fn default() -> Self {
        Self::new()
    }
}

pub const DEFAULT_RATIONAL_BOUND: u64 = 1 << 16;

impl Rationals {
    pub fn new() -> Self {
        Self { random_bound: DEFAULT_RATIONAL_BOUND, counter: None }
    }

    /// Random elements are drawn uniformly from the integers in `[-bound, bound]`.
    pub fn with_random_bound(mut self, bound: u64) -> Self {
        self.random_bound = bound;
        self
    }

    pub fn random_bound(&self) -> u64 {
        self.random_bound
    }
}

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn counter(&self) -> Option<&Arc<OpCounter>> {
        self.counter.as_ref()
    }

    fn with_counter(&self, counter: Arc<OpCounter>) -> Self {
        Self { random_bound: self.random_bound, counter: Some(counter) }
    }

    fn without_counter(&self) -> Self {
        Self { random_bound: self.random_bound, counter: None }
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.tally(1);
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.tally(1);
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.tally(1);
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        self.tally(1);
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.tally(1);
        Ok(a.recip())
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let b = self.random_bound as i128;
        let v = rng.random_range(-b..=b);
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_element(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }

    fn format_element(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn canonicalize(&self, a: &BigRational) -> Result<BigRational> {
        if a.denom().is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = a.numer().gcd(a.denom());
        let (mut n, mut d) = (a.numer() / &g, a.denom() / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(BigRational::new_raw(n, d))
    }

    fn cmp_elements(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }

    fn from_rational(&self, r: &BigRational) -> Result<BigRational> {
        Ok(r.clone())
    }
}

/// Parses `"-12"`, `"+3"`, `"7/4"` or `"−5/2"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim().replace('\u{2212}', "-");
    let parse_int = |x: &str| -> Result<BigInt> {
        let x = x.trim();
        let x = x.strip_prefix('+').unwrap_or(x);
        if x.is_empty() || !x.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("invalid number {s:?}")));
        }
        x.parse::<BigInt>().map_err(|e| Error::Parse(format!("invalid number {s:?}: {e}")))
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(&t)?)),
        Some((n, d)) => {
            let (n, d) = (parse_int(n)?, parse_int(d)?);
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
