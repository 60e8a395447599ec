//! Factorization over Q by the Zassenhaus method: reduce a primitive
//! integer associate modulo a suitable prime, factor there, Hensel-lift the
//! modular factors, then recombine subsets of lifted factors into true
//! integer factors.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{finite, FactorOptions, Poly};
use crate::error::{Error, Result};
use crate::fields::{is_prime, PrimeField, Rationals, Residue};

type ZPoly = Vec<BigInt>;

/// Most subsets examined during recombination before giving up.
const MAX_RECOMBINATION_TRIALS: usize = 1 << 20;

/// Candidate primes compared when choosing the modulus.
const PRIME_CANDIDATES: usize = 5;

fn trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

fn zadd_scaled(a: &ZPoly, c: &BigInt, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) + c * b.get(i).unwrap_or(&zero)).collect())
}

fn zscale(a: &ZPoly, c: &BigInt) -> ZPoly {
    trim(a.iter().map(|x| x * c).collect())
}

/// Coefficients reduced into `[0, m)`.
fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    trim(a.iter().map(|x| x.mod_floor(m)).collect())
}

/// Coefficients reduced into `(-m/2, m/2]`.
fn zsym(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        a.iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn norm1(a: &ZPoly) -> BigInt {
    a.iter().map(|x| x.abs()).sum()
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content and makes the leading coefficient positive.
fn primitive(a: &ZPoly) -> ZPoly {
    let mut c = content(a);
    if c.is_zero() {
        return a.clone();
    }
    if a.last().is_some_and(|x| x.is_negative()) {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

fn to_gf(k: &PrimeField, a: &ZPoly) -> Poly<Residue> {
    let p = BigInt::from(k.modulus());
    Poly::new(
        k,
        a.iter()
            .map(|x| k.element(x.mod_floor(&p).to_u64().expect("residue fits")).expect("reduced"))
            .collect(),
    )
}

fn from_gf(a: &Poly<Residue>) -> ZPoly {
    a.coeffs().iter().map(|r| BigInt::from(r.value())).collect()
}

/// Primitive integer polynomial with positive leading coefficient that is a
/// rational multiple of `f`.
pub fn integer_content_form(f: &Poly<BigRational>) -> Vec<BigInt> {
    let lcm = f.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let z: ZPoly = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(&z)
}

fn to_monic_rational(k: &Rationals, a: &ZPoly) -> Poly<BigRational> {
    let lc = a.last().expect("nonzero").clone();
    Poly::new(k, a.iter().map(|x| BigRational::new(x.clone(), lc.clone())).collect())
}

/// Monic irreducible factors over Q of a monic squarefree `f`.
pub(super) fn split_squarefree(
    k: &Rationals,
    f: &Poly<BigRational>,
    opts: &FactorOptions,
) -> Result<Vec<Poly<BigRational>>> {
    let n = f.degree_or_zero();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    let mut z = integer_content_form(f);
    let mut found: Vec<ZPoly> = Vec::new();
    if z[0].is_zero() {
        // Squarefree, so λ divides at most once.
        found.push(vec![BigInt::zero(), BigInt::one()]);
        z.remove(0);
    }
    match z.len() {
        0 | 1 => {}
        2 => found.push(z),
        _ => found.extend(zassenhaus(&z, opts)?),
    }
    Ok(found.iter().map(|g| to_monic_rational(k, g)).collect())
}

/// Picks the admissible prime giving the fewest modular factors among the
/// first few candidates.
fn choose_prime(z: &ZPoly, opts: &FactorOptions) -> (PrimeField, Vec<Poly<Residue>>) {
    let lc = z.last().expect("nonzero");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(PrimeField, Vec<Poly<Residue>>)> = None;
    let mut seen = 0;
    let mut p = 3u64;
    while seen < PRIME_CANDIDATES {
        p += 2;
        if !is_prime(p) || (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let k = PrimeField::new(p).expect("prime");
        let fbar = to_gf(&k, z).monic(&k);
        if !Poly::gcd(&k, &fbar, &fbar.derivative(&k)).is_one(&k) {
            continue;
        }
        seen += 1;
        let factors = finite::split_squarefree(&k, &fbar, &mut rng);
        let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
        let done = factors.len() == 1;
        if better {
            best = Some((k, factors));
        }
        if done {
            break;
        }
    }
    best.expect("some prime is admissible")
}

/// Splits a primitive squarefree integer polynomial of degree ≥ 2 with
/// nonzero constant term into primitive irreducible factors.
fn zassenhaus(z: &ZPoly, opts: &FactorOptions) -> Result<Vec<ZPoly>> {
    let n = z.len() - 1;
    let lc = z[n].clone();
    let (kp, modular) = choose_prime(z, opts);
    if modular.len() == 1 {
        return Ok(vec![z.clone()]);
    }
    let p = BigInt::from(kp.modulus());

    // Coefficient bound for any factor (times the leading coefficient).
    let max_coeff = z.iter().map(|c| c.abs()).max().expect("nonempty");
    let sqrt_n1 = ((n + 1) as f64).sqrt().ceil() as u64;
    let bound = BigInt::from(sqrt_n1) * (BigInt::one() << n) * &max_coeff * lc.abs();
    let two_bound = &bound * 2;
    let mut lift_exp = 1u32;
    let mut modulus = p.clone();
    while modulus <= two_bound {
        modulus *= &p;
        lift_exp += 1;
    }

    let lifted = hensel_lift(&kp, z, &modular, lift_exp, &modulus);
    recombine(z, &lifted, &modulus, &bound, n, opts)
}

/// Lifts `z ≡ lc · Π g_i (mod p)` to a factorization modulo `p^e = modulus`
/// with monic lifted factors.
fn hensel_lift(
    kp: &PrimeField,
    z: &ZPoly,
    modular: &[Poly<Residue>],
    lift_exp: u32,
    modulus: &BigInt,
) -> Vec<ZPoly> {
    let lc = z.last().expect("nonzero").clone();
    let lc_bar = kp.element((lc.mod_floor(&BigInt::from(kp.modulus()))).to_u64().expect("fits")).expect("reduced");
    let mut current = zmod(z, modulus);
    let mut out = Vec::with_capacity(modular.len());
    for i in 0..modular.len() - 1 {
        let g = &modular[i];
        let h = modular[i + 1..]
            .iter()
            .fold(Poly::constant(kp, lc_bar), |acc, t| acc.mul(kp, t));
        let (g_up, h_up) = lift_pair(kp, &current, g, &h, lift_exp, modulus);
        out.push(g_up);
        current = h_up;
    }
    let lc_inv = lc.modinv(modulus).expect("p does not divide the leading coefficient");
    out.push(zmod(&zscale(&current, &lc_inv), modulus));
    out
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)`, `g` monic and coprime to `h`,
/// to `f ≡ g*·h* (mod p^e)` with `g*` monic.
fn lift_pair(
    kp: &PrimeField,
    f: &ZPoly,
    g_bar: &Poly<Residue>,
    h_bar: &Poly<Residue>,
    lift_exp: u32,
    modulus: &BigInt,
) -> (ZPoly, ZPoly) {
    let (one, _, t) = Poly::xgcd(kp, g_bar, h_bar);
    debug_assert!(one.is_one(kp), "modular factors must be coprime");
    let p = BigInt::from(kp.modulus());
    let mut g = from_gf(g_bar);
    let mut h = from_gf(h_bar);
    let mut pk = p.clone();
    for _ in 1..lift_exp {
        let err = zmod(&zsub(f, &zmul(&g, &h)), modulus);
        let scaled: ZPoly = err
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&pk);
                debug_assert!(r.is_zero());
                q
            })
            .collect();
        let e = to_gf(kp, &scaled);
        let dg = t.mul(kp, &e).rem(kp, g_bar).expect("nonzero");
        let dh = e.sub(kp, &h_bar.mul(kp, &dg)).exact_div(kp, g_bar).expect("lifting step divides");
        g = zmod(&zadd_scaled(&g, &pk, &from_gf(&dg)), modulus);
        h = zmod(&zadd_scaled(&h, &pk, &from_gf(&dh)), modulus);
        pk *= &p;
    }
    (g, h)
}

/// Lexicographic index subsets of `0..len` with `size` elements.
fn next_combination(idx: &mut [usize], len: usize) -> bool {
    let size = idx.len();
    for i in (0..size).rev() {
        if idx[i] < len - size + i {
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn recombine(
    z: &ZPoly,
    lifted: &[ZPoly],
    modulus: &BigInt,
    bound: &BigInt,
    degree: usize,
    opts: &FactorOptions,
) -> Result<Vec<ZPoly>> {
    let mut remaining: Vec<ZPoly> = lifted.to_vec();
    let mut fstar = z.clone();
    let mut found = Vec::new();
    let mut size = 1;
    let mut trials = 0usize;
    let product = |polys: &mut dyn Iterator<Item = &ZPoly>, lead: &BigInt| {
        polys.fold(vec![lead.clone()], |acc, g| zmod(&zmul(&acc, g), modulus))
    };
    'sizes: while 2 * size <= remaining.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            trials += 1;
            if trials > MAX_RECOMBINATION_TRIALS {
                return Err(Error::FactorizationTooLarge {
                    degree,
                    cap: opts.rational_degree_cap,
                });
            }
            let b = fstar.last().expect("nonzero").clone();
            let in_s = |i: usize| idx.contains(&i);
            let g = zsym(&product(&mut remaining.iter().enumerate().filter(|(i, _)| in_s(*i)).map(|(_, g)| g), &b), modulus);
            let h = zsym(&product(&mut remaining.iter().enumerate().filter(|(i, _)| !in_s(*i)).map(|(_, g)| g), &b), modulus);
            if &(norm1(&g) * norm1(&h)) <= bound && zmul(&g, &h) == zscale(&fstar, &b) {
                found.push(primitive(&g));
                fstar = primitive(&h);
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !idx.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                continue 'sizes;
            }
            if !next_combination(&mut idx, remaining.len()) {
                break;
            }
        }
        size += 1;
    }
    if fstar.len() > 1 {
        found.push(fstar);
    }
    debug_assert!(found.iter().all(|g| g.last().is_some_and(|c| c.sign() == Sign::Plus)));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        trim(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let mut idx = vec![0, 1];
        let mut all = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn hensel_lift_reproduces_product() {
        // (2λ + 3)(λ^2 + 5λ − 7) lifted from mod 11.
        let f = zmul(&z(&[3, 2]), &z(&[-7, 5, 1]));
        let kp = PrimeField::new(11).unwrap();
        let fbar = to_gf(&kp, &f).monic(&kp);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let modular = finite::split_squarefree(&kp, &fbar, &mut rng);
        let modulus = BigInt::from(11).pow(6);
        let lifted = hensel_lift(&kp, &f, &modular, 6, &modulus);
        let prod = lifted.iter().fold(vec![BigInt::from(2)], |acc, g| zmod(&zmul(&acc, g), &modulus));
        assert_eq!(prod, zmod(&f, &modulus));
    }

    #[test]
    fn non_monic_integer_factors_are_recovered() {
        let f = zmul(&zmul(&z(&[3, 2]), &z(&[-7, 5, 1])), &z(&[1, 0, 0, 4]));
        let mut got = zassenhaus(&f, &FactorOptions::default()).unwrap();
        got.sort_by_key(|g| g.len());
        assert_eq!(got, vec![z(&[3, 2]), z(&[-7, 5, 1]), z(&[1, 0, 0, 4])]);
    }

    #[test]
    fn content_form_clears_denominators() {
        let k = Rationals::new();
        let f = Poly::new(
            &k,
            vec![BigRational::new(1.into(), 6.into()), BigRational::new((-1).into(), 4.into()), BigRational::one()],
        );
        assert_eq!(integer_content_form(&f), z(&[2, -3, 12]));
    }
}
