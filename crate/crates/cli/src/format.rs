//! Text forms of polynomials and factored polynomials.
//!
//! Polynomials render in descending degree, e.g. `λ^2-3*λ+2` or
//! `3/2*λ-1/2`. Factored forms render as `(λ-1)^2(λ-2)`, a lone factor of
//! exponent one renders bare, and the empty product renders as `1`. The
//! parsers accept everything the renderers emit, plus `x` for `λ`, the
//! Unicode minus sign and whitespace.

use std::cmp::Ordering;

use minannih_core::{Error, FactoredPoly, Field, Poly, Result};

const VAR: char = 'λ';

pub fn render_poly<F: Field>(k: &F, f: &Poly<F::Elem>) -> String {
    let mut out = String::new();
    for (deg, c) in f.coeffs().iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let negative = k.cmp_elements(c, &k.zero()) == Ordering::Less;
        let mag = if negative { k.neg(c) } else { c.clone() };
        if negative {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if deg == 0 {
            out.push_str(&k.format_element(&mag));
            continue;
        }
        if !k.is_one(&mag) {
            out.push_str(&k.format_element(&mag));
            out.push('*');
        }
        out.push(VAR);
        if deg > 1 {
            out.push('^');
            out.push_str(&deg.to_string());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '\u{2212}' => '-',
            'x' => VAR,
            c => c,
        })
        .collect()
}

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("polynomial {s:?}: {why}"))
}

fn parse_term<F: Field>(k: &F, term: &str, whole: &str) -> Result<(usize, F::Elem)> {
    let Some((coef, power)) = term.split_once(VAR) else {
        return Ok((0, k.parse_element(term).map_err(|_| parse_err(whole, "bad coefficient"))?));
    };
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = if coef.is_empty() { k.one() } else { k.parse_element(coef).map_err(|_| parse_err(whole, "bad coefficient"))? };
    let deg = match power {
        "" => 1,
        p => p
            .strip_prefix('^')
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(|| parse_err(whole, "bad exponent"))?,
    };
    Ok((deg, c))
}

pub fn parse_poly<F: Field>(k: &F, s: &str) -> Result<Poly<F::Elem>> {
    let t = normalize(s);
    if t.is_empty() {
        return Err(parse_err(s, "empty"));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (i, ch) in t.chars().enumerate() {
        // A sign directly after '/' or '^' belongs to the number.
        let after_operator = current.ends_with('/') || current.ends_with('^');
        if (ch == '+' || ch == '-') && !after_operator {
            if i > 0 {
                if current.is_empty() {
                    return Err(parse_err(s, "empty term"));
                }
                terms.push((negative, std::mem::take(&mut current)));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(parse_err(s, "trailing sign"));
    }
    terms.push((negative, current));

    let mut coeffs: Vec<F::Elem> = Vec::new();
    for (neg, term) in terms {
        let (deg, c) = parse_term(k, &term, s)?;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, k.zero());
        }
        let c = if neg { k.neg(&c) } else { c };
        coeffs[deg] = k.add(&coeffs[deg], &c);
    }
    Ok(Poly::new(k, coeffs))
}

pub fn render_factored<F: Field>(k: &F, f: &FactoredPoly<F::Elem>) -> String {
    match f.factors() {
        [] => "1".to_string(),
        [(g, 1)] => render_poly(k, g),
        factors => factors
            .iter()
            .map(|(g, m)| {
                let body = if *g == Poly::x(k) { VAR.to_string() } else { format!("({})", render_poly(k, g)) };
                if *m > 1 {
                    format!("{body}^{m}")
                } else {
                    body
                }
            })
            .collect(),
    }
}

/// Parses `(p)^e` and `λ^e` items written side by side.
#[allow(clippy::type_complexity)]
fn parse_product<F: Field>(k: &F, t: &str) -> Option<Result<Vec<(Poly<F::Elem>, usize)>>> {
    let chars: Vec<char> = t.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let f = match chars[i] {
            '(' => {
                let close = chars[i..].iter().position(|&c| c == ')')? + i;
                let inner: String = chars[i + 1..close].iter().collect();
                i = close + 1;
                match parse_poly(k, &inner) {
                    Ok(f) => f,
                    Err(e) => return Some(Err(e)),
                }
            }
            VAR => {
                i += 1;
                Poly::x(k)
            }
            _ => return None,
        };
        let mut e = 1;
        if chars.get(i) == Some(&'^') {
            let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
            e = digits.parse().ok()?;
            i += 1 + digits.len();
        }
        out.push((f, e));
    }
    Some(Ok(out))
}

/// Inverse of [`render_factored`]: `(factor, exponent)` pairs in order.
pub fn parse_factored<F: Field>(k: &F, s: &str) -> Result<Vec<(Poly<F::Elem>, usize)>> {
    let t = normalize(s);
    if t == "1" {
        return Ok(Vec::new());
    }
    match parse_product(k, &t) {
        Some(r) => r,
        None => Ok(vec![(parse_poly(k, &t)?, 1)]),
    }
}

/// Ascending coefficient strings.
pub fn coeff_strings<F: Field>(k: &F, f: &Poly<F::Elem>) -> Vec<String> {
    f.coeffs().iter().map(|c| k.format_element(c)).collect()
}

pub fn poly_from_strings<F: Field>(k: &F, coeffs: &[String]) -> Result<Poly<F::Elem>> {
    let c = coeffs.iter().map(|s| k.parse_element(s)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(k, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use minannih_core::{PrimeField, Rationals};

    #[test]
    fn renders_rational_polynomials() {
        let k = Rationals::new();
        assert_eq!(render_poly(&k, &Poly::from_i64s(&k, &[2, -3, 1])), "λ^2-3*λ+2");
        assert_eq!(render_poly(&k, &Poly::from_i64s(&k, &[-1, 1])), "λ-1");
        assert_eq!(render_poly(&k, &Poly::from_i64s(&k, &[0, 0, -1])), "-λ^2");
        assert_eq!(render_poly(&k, &Poly::zero()), "0");
        let half = parse_poly(&k, "1/2*λ-3/4").unwrap();
        assert_eq!(render_poly(&k, &half), "1/2*λ-3/4");
    }

    #[test]
    fn renders_residues_nonnegative() {
        let k = PrimeField::new(7).unwrap();
        assert_eq!(render_poly(&k, &Poly::from_i64s(&k, &[-1, 1])), "λ+6");
    }

    #[test]
    fn factored_forms() {
        let k = Rationals::new();
        let f = |c: &[i64]| Poly::from_i64s(&k, c);
        let two = FactoredPoly::new(&k, vec![(f(&[-1, 1]), 1), (f(&[-2, 1]), 1)]).unwrap();
        assert_eq!(render_factored(&k, &two), "(λ-1)(λ-2)");
        let shift = FactoredPoly::new(&k, vec![(Poly::x(&k), 3)]).unwrap();
        assert_eq!(render_factored(&k, &shift), "λ^3");
        let single = FactoredPoly::new(&k, vec![(f(&[-1, 1]), 1)]).unwrap();
        assert_eq!(render_factored(&k, &single), "λ-1");
        let mixed = FactoredPoly::new(&k, vec![(Poly::x(&k), 1), (f(&[1, 0, 1]), 2)]).unwrap();
        assert_eq!(render_factored(&k, &mixed), "λ(λ^2+1)^2");
        assert_eq!(render_factored(&k, &FactoredPoly::new(&k, vec![]).unwrap()), "1");
    }

    #[test]
    fn parser_accepts_variants() {
        let k = Rationals::new();
        assert_eq!(parse_poly(&k, "x^2 − 3x + 2").unwrap(), Poly::from_i64s(&k, &[2, -3, 1]));
        assert_eq!(parse_poly(&k, "λ + λ").unwrap(), Poly::from_i64s(&k, &[0, 2]));
        assert_eq!(parse_poly(&k, "-5").unwrap(), Poly::from_i64s(&k, &[-5]));
        assert!(parse_poly(&k, "λ^").is_err());
        assert!(parse_poly(&k, "λ+").is_err());
        assert!(parse_poly(&k, "").is_err());
        assert!(parse_poly(&k, "2y").is_err());
    }

    #[test]
    fn round_trips() {
        let k = Rationals::new();
        let polys = [
            vec![2, -3, 1],
            vec![0, 0, 0, 1],
            vec![7],
            vec![-1, 0, 4, 0, -9],
            vec![1, 1],
        ];
        for c in polys {
            let f = Poly::from_i64s(&k, &c);
            assert_eq!(parse_poly(&k, &render_poly(&k, &f)).unwrap(), f);
        }
        let f = |c: &[i64]| Poly::from_i64s(&k, c);
        let cases = vec![
            vec![],
            vec![(f(&[-1, 1]), 1)],
            vec![(Poly::x(&k), 3)],
            vec![(Poly::x(&k), 1), (f(&[1, 0, 1]), 2), (f(&[-3, 1]), 1)],
            vec![(f(&[1, 1, 1]), 4)],
        ];
        for factors in cases {
            let fp = FactoredPoly::new(&k, factors.clone()).unwrap();
            assert_eq!(parse_factored(&k, &render_factored(&k, &fp)).unwrap(), factors);
        }
        let p = PrimeField::new(32003).unwrap();
        let g = Poly::from_i64s(&p, &[5, -1, 0, 1]);
        assert_eq!(parse_poly(&p, &render_poly(&p, &g)).unwrap(), g);
    }
}
