//! Plain-text polynomials: `[c] * x1^e1 * x3 + [c']`, where each coefficient
//! `c` is a cyclotomic literal `(p/q)*z^k + ...` and `z` is the primitive
//! `N`-th root of unity. Terms print in decreasing graded-lex order; the zero
//! polynomial prints as `0`.

use std::fmt;

use crate::cyclo::{parse_cycnum, parse_rational, CycNum};
use crate::error::{Error, Result};

use super::poly::{Monomial, SparsePoly};

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " * x{}", i + 1)?,
                    _ => write!(f, " * x{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Parses the text format for a polynomial in `nvars` variables over `Q(z_N)`.
///
/// Besides the canonical output, bare rational coefficients (`3/2 * x1`) and
/// omitted coefficients (`x1 * x2`) are accepted.
pub fn parse_poly(text: &str, nvars: usize, order: u32) -> Result<SparsePoly> {
    let err = |m: String| Error::Parse(format!("polynomial: {m}"));
    let text = text.trim();
    let mut poly = SparsePoly::zero(nvars, order);
    if text == "0" {
        return Ok(poly);
    }
    for term in split_top_level(text)? {
        let term = term.trim();
        if term.is_empty() {
            return Err(err("empty term".into()));
        }
        let (coef, rest) = if let Some(inner) = term.strip_prefix('[') {
            let close = inner
                .find(']')
                .ok_or_else(|| err(format!("unclosed `[` in `{term}`")))?;
            (parse_cycnum(&inner[..close], order)?, inner[close + 1..].trim())
        } else {
            let (head, tail) = term.split_once('*').unwrap_or((term, ""));
            if head.trim().starts_with('x') {
                (CycNum::one(order), term)
            } else {
                let q = parse_rational(head)
                    .ok_or_else(|| err(format!("bad coefficient `{}`", head.trim())))?;
                (CycNum::from_rational(q, order), tail.trim())
            }
        };
        let mut exps = vec![0u32; nvars];
        let rest = rest.strip_prefix('*').unwrap_or(rest);
        for factor in rest.split('*').map(str::trim).filter(|s| !s.is_empty()) {
            let body = factor
                .strip_prefix('x')
                .ok_or_else(|| err(format!("bad factor `{factor}`")))?;
            let (var, e) = match body.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| err(format!("bad exponent in `{factor}`")))?),
                None => (body, 1),
            };
            let var: usize = var
                .parse()
                .map_err(|_| err(format!("bad variable in `{factor}`")))?;
            if var == 0 || var > nvars {
                return Err(err(format!("variable x{var} out of range 1..={nvars}")));
            }
            exps[var - 1] += e;
        }
        poly.add_term(Monomial(exps), coef)?;
    }
    Ok(poly)
}

/// Splits on `+` outside square brackets.
fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut parts = vec![];
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse("unbalanced `]` in polynomial".into()));
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced `[` in polynomial".into()));
    }
    parts.push(&text[start..]);
    Ok(parts)
}
