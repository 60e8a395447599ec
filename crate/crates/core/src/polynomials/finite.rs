//! Factorization over GF(p): distinct-degree splitting followed by
//! Cantor–Zassenhaus equal-degree splitting, plus Rabin's irreducibility test.

use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::fields::{Field, PrimeField, Residue};

type P = Poly<Residue>;

/// Monic irreducible factors of a monic squarefree `f` (unsorted).
pub(super) fn split_squarefree(k: &PrimeField, f: &P, rng: &mut ChaCha8Rng) -> Vec<P> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(k, f) {
        equal_degree(k, &g, d, rng, &mut out);
    }
    out
}

/// Groups the factors of a squarefree `f` by degree: each returned `(g, d)`
/// is the product of all degree-`d` irreducible factors.
fn distinct_degree(k: &PrimeField, f: &P) -> Vec<(P, usize)> {
    let p = k.modulus();
    let x = Poly::x(k);
    let mut out = Vec::new();
    let mut h = f.clone();
    let mut w = x.clone();
    let mut d = 0;
    while h.degree_or_zero() >= 2 * (d + 1) {
        d += 1;
        w = w.powmod(k, p, &h);
        let g = Poly::gcd(k, &h, &w.sub(k, &x));
        if !g.is_one(k) {
            h = h.exact_div(k, &g).expect("gcd divides");
            w = w.rem(k, &h).expect("nonzero");
            out.push((g, d));
        }
    }
    if h.degree_or_zero() > 0 {
        let dh = h.degree_or_zero();
        out.push((h, dh));
    }
    out
}

/// Splits `g`, a product of distinct irreducibles of degree `d`, by random
/// trace-like maps `a^{(p^d - 1)/2} - 1`.
fn equal_degree(k: &PrimeField, g: &P, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<P>) {
    let n = g.degree_or_zero();
    if n == d {
        out.push(g.clone());
        return;
    }
    let p = k.modulus();
    let one = Poly::one(k);
    loop {
        let coeffs: Vec<_> = (0..n).map(|_| k.random_element(rng)).collect();
        let a = Poly::new(k, coeffs);
        if a.degree_or_zero() == 0 {
            continue;
        }
        // a^{1 + p + ... + p^{d-1}} via Frobenius powers keeps exponents in u64.
        let mut frob = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            frob = frob.powmod(k, p, g);
            norm = norm.mulmod(k, &frob, g);
        }
        let b = norm.powmod(k, (p - 1) / 2, g).sub(k, &one);
        let h = Poly::gcd(k, g, &b);
        let dh = h.degree_or_zero();
        if dh > 0 && dh < n {
            let rest = g.exact_div(k, &h).expect("gcd divides");
            equal_degree(k, &h, d, rng, out);
            equal_degree(k, &rest, d, rng, out);
            return;
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: monic `f` of degree `n` is irreducible iff
/// `λ^{p^n} ≡ λ (mod f)` and `gcd(f, λ^{p^{n/r}} − λ) = 1` for each prime `r | n`.
pub fn is_irreducible_mod_p(k: &PrimeField, f: &P) -> bool {
    let k = &k.without_counter();
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let p = k.modulus();
    let f = f.monic(k);
    let x = Poly::x(k);
    let frob_pow = |e: usize| {
        let mut w = x.rem(k, &f).expect("nonzero");
        for _ in 0..e {
            w = w.powmod(k, p, &f);
        }
        w
    };
    if frob_pow(n) != x.rem(k, &f).expect("nonzero") {
        return false;
    }
    prime_divisors(n)
        .into_iter()
        .all(|r| Poly::gcd(k, &f, &frob_pow(n / r).sub(k, &x)).is_one(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn prime_divisors_small() {
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(13), vec![13]);
        assert_eq!(prime_divisors(1), Vec::<usize>::new());
    }

    #[test]
    fn distinct_degree_groups_by_degree() {
        let k = PrimeField::new(7).unwrap();
        // (λ−1)(λ−2)(λ²+1)
        let f = Poly::from_i64s(&k, &[-1, 1])
            .mul(&k, &Poly::from_i64s(&k, &[-2, 1]))
            .mul(&k, &Poly::from_i64s(&k, &[1, 0, 1]));
        let groups = distinct_degree(&k, &f);
        let degs: Vec<_> = groups.iter().map(|(g, d)| (g.degree_or_zero(), *d)).collect();
        assert_eq!(degs, vec![(2, 1), (2, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(split_squarefree(&k, &f, &mut rng).len(), 3);
    }
}
