//! Textual form of ring elements.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := sign? term (sign term)*
//! sign   := '+' | '-'
//! term   := factor (('*' | '·') factor)*
//! factor := INT ('/' INT)? | NAME
//! ```
//!
//! `NAME` is a generator name of the tower; `INT / INT` must have a
//! power-of-two denominator. Example: `1/2 + 3*w - 1/4*i*w`.

use super::{Dyadic, RingElement, RingError, Tower};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    Slash,
    Star,
    Plus,
    Minus,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, RingError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    n.push(d);
                    chars.next();
                }
                out.push(Tok::Num(n));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut n = String::new();
                while let Some(&d) = chars
                    .peek()
                    .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
                {
                    n.push(d);
                    chars.next();
                }
                out.push(Tok::Name(n));
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '*' | '·' => {
                chars.next();
                out.push(Tok::Star);
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' | '−' => {
                chars.next();
                out.push(Tok::Minus);
            }
            other => {
                return Err(RingError::Parse(format!(
                    "unexpected character `{other}` in `{s}`"
                )))
            }
        }
    }
    Ok(out)
}

/// Parsed terms: coefficient and the generator names multiplied into it.
pub(crate) type Terms = Vec<(Dyadic, Vec<String>)>;

pub(crate) fn parse_terms(s: &str) -> Result<Terms, RingError> {
    let toks = tokenize(s)?;
    let err = |msg: &str| RingError::Parse(format!("{msg} in `{}`", s.trim()));
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut first = true;
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos] {
            Tok::Plus => pos += 1,
            Tok::Minus => {
                negative = true;
                pos += 1
            }
            _ if first => {}
            _ => return Err(err("expected `+` or `-`")),
        }
        first = false;
        let mut coeff = Dyadic::one();
        let mut names = Vec::new();
        loop {
            match toks.get(pos) {
                Some(Tok::Num(n)) => {
                    pos += 1;
                    let mut lit = n.clone();
                    if toks.get(pos) == Some(&Tok::Slash) {
                        match toks.get(pos + 1) {
                            Some(Tok::Num(d)) => {
                                lit = format!("{n}/{d}");
                                pos += 2;
                            }
                            _ => return Err(err("expected denominator")),
                        }
                    }
                    coeff = &coeff * &lit.parse::<Dyadic>()?;
                }
                Some(Tok::Name(n)) => {
                    names.push(n.clone());
                    pos += 1;
                }
                _ => return Err(err("expected a number or generator name")),
            }
            if toks.get(pos) == Some(&Tok::Star) {
                pos += 1;
            } else {
                break;
            }
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((coeff, names));
    }
    Ok(terms)
}

/// Turns terms into a coefficient vector when each monomial names distinct
/// generators from `names`. Used before a tower exists.
pub(crate) fn assemble_terms(
    terms: &Terms,
    names: &[String],
    dim: usize,
) -> Result<Vec<Dyadic>, RingError> {
    let mut out = vec![Dyadic::zero(); dim];
    for (coeff, monomial) in terms {
        let mut mask = 0usize;
        for n in monomial {
            let j = names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| RingError::Parse(format!("unknown generator `{n}`")))?;
            if mask >> j & 1 == 1 {
                return Err(RingError::Parse(format!(
                    "generator `{n}` repeated in a monomial; write relations in reduced form"
                )));
            }
            mask |= 1 << j;
        }
        out[mask] += coeff;
    }
    Ok(out)
}

pub(crate) fn parse_element(tower: &Tower, s: &str) -> Result<RingElement, RingError> {
    let mut acc = tower.zero();
    for (coeff, monomial) in parse_terms(s)? {
        let mut term = tower.from_dyadic(coeff);
        for n in &monomial {
            let j = tower
                .generator_index(n)
                .ok_or_else(|| RingError::Parse(format!("unknown generator `{n}`")))?;
            term = &term * &tower.generator(j);
        }
        acc += &term;
    }
    Ok(acc)
}

/// Canonical text for a coefficient vector, monomials in basis order.
pub fn format_coeffs(coeffs: &[Dyadic], names: &[String]) -> String {
    let mut out = String::new();
    for (mask, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c.signum() < 0;
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let monomial: Vec<&str> = (0..names.len())
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| names[j].as_str())
            .collect();
        if monomial.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&monomial.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
