//! Plain-text form and body specifications.
//!
//! Forms: `"x1; x2; x1+x2"`, `"2*x1 - 3x2 + 7"`, `"x1 - N - 1"` (the symbol
//! `N` stands for the size parameter).
//! Bodies: `"box:0,N;0,N"`, `"simplex:1,N"` (`x_i >= 1`, `sum x_i <= N`),
//! `"hpoly:-1,0|-1; 0,-1|-1; 1,1|N"` (rows `a_1,...,a_d|b` of `A x <= b`,
//! rational entries written `p/q`).

use std::collections::BTreeMap;

use num_rational::Ratio;

use super::{AffineForm, ConvexBody, FormSystem, HPolytope};
use crate::error::{Error, Result};

fn parse_err(what: &str, input: &str) -> Error {
    Error::arg(format!("cannot parse {what}: {input:?}"))
}

/// Linear expression in `x1, x2, ...` and `N`.
fn parse_linear(expr: &str, n: i64) -> Result<(BTreeMap<usize, i64>, i64)> {
    let s: Vec<u8> = expr.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err("empty expression", expr));
    }
    let err = || parse_err("expression", expr);
    let overflow = || Error::Arithmetic(format!("coefficient overflow in {expr:?}"));
    let mut vars = BTreeMap::new();
    let mut constant = 0i64;
    let mut i = 0;
    while i < s.len() {
        let mut sign = 1i64;
        if s[i] == b'+' || s[i] == b'-' {
            if s[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(err());
        }
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let has_number = i > start;
        let coef: i64 = if has_number {
            std::str::from_utf8(&s[start..i])
                .expect("ascii digits")
                .parse()
                .map_err(|_| overflow())?
        } else {
            1
        };
        let mut starred = false;
        if i < s.len() && s[i] == b'*' {
            starred = true;
            i += 1;
        }
        let term = coef.checked_mul(sign).ok_or_else(overflow)?;
        match s.get(i) {
            Some(b'x') | Some(b'X') => {
                i += 1;
                let vstart = i;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = std::str::from_utf8(&s[vstart..i])
                    .expect("ascii digits")
                    .parse()
                    .map_err(|_| err())?;
                if idx == 0 {
                    return Err(Error::arg(format!("variables are numbered from x1 in {expr:?}")));
                }
                let slot = vars.entry(idx).or_insert(0i64);
                *slot = slot.checked_add(term).ok_or_else(overflow)?;
            }
            Some(b'N') => {
                i += 1;
                let v = term.checked_mul(n).ok_or_else(overflow)?;
                constant = constant.checked_add(v).ok_or_else(overflow)?;
            }
            _ if has_number && !starred => {
                constant = constant.checked_add(term).ok_or_else(overflow)?;
            }
            _ => return Err(err()),
        }
    }
    Ok((vars, constant))
}

fn parse_scalar(expr: &str, n: i64) -> Result<i64> {
    let (vars, c) = parse_linear(expr, n)?;
    if !vars.is_empty() {
        return Err(parse_err("constant (no variables allowed)", expr));
    }
    Ok(c)
}

fn parse_rational(expr: &str, n: i64) -> Result<Ratio<i64>> {
    match expr.split_once('/') {
        Some((p, q)) => {
            let p = parse_scalar(p, n)?;
            let q = parse_scalar(q, n)?;
            if q == 0 {
                return Err(parse_err("rational with zero denominator", expr));
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(parse_scalar(expr, n)?)),
    }
}

/// Parses `;`-separated forms. The dimension is the largest variable index.
pub fn parse_forms(spec: &str, n: i64) -> Result<FormSystem> {
    let parsed = spec
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_linear(p, n))
        .collect::<Result<Vec<_>>>()?;
    let dim = parsed
        .iter()
        .filter_map(|(v, _)| v.keys().next_back().copied())
        .max()
        .ok_or_else(|| parse_err("form list", spec))?;
    let forms = parsed
        .into_iter()
        .map(|(vars, c)| {
            let mut coeffs = vec![0i64; dim];
            for (k, v) in vars {
                coeffs[k - 1] = v;
            }
            AffineForm::new(coeffs, c)
        })
        .collect::<Result<Vec<_>>>()?;
    FormSystem::new(forms)
}

/// Parses a body specification in dimension `dim`.
pub fn parse_body(spec: &str, dim: usize, n: i64) -> Result<ConvexBody> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| parse_err("body (expected kind:params)", spec))?;
    match kind.trim() {
        "box" => {
            let mut pairs = rest
                .split(';')
                .map(|pair| {
                    let (lo, hi) = pair.split_once(',').ok_or_else(|| parse_err("box range", pair))?;
                    Ok((parse_scalar(lo, n)?, parse_scalar(hi, n)?))
                })
                .collect::<Result<Vec<_>>>()?;
            if pairs.len() == 1 && dim > 1 {
                pairs = vec![pairs[0]; dim];
            }
            if pairs.len() != dim {
                return Err(Error::arg(format!(
                    "box has {} ranges but the forms have {dim} variables",
                    pairs.len()
                )));
            }
            let (lo, hi) = pairs.into_iter().unzip();
            ConvexBody::boxed(lo, hi)
        }
        "simplex" => {
            let (lo, hi) = rest.split_once(',').ok_or_else(|| parse_err("simplex", rest))?;
            ConvexBody::simplex(dim, parse_scalar(lo, n)?, parse_scalar(hi, n)?)
        }
        "hpoly" => {
            let rows = rest
                .split(';')
                .filter(|r| !r.trim().is_empty())
                .map(|row| {
                    let (a, b) = row.split_once('|').ok_or_else(|| parse_err("hpoly row", row))?;
                    let a = a
                        .split(',')
                        .map(|e| parse_rational(e, n))
                        .collect::<Result<Vec<_>>>()?;
                    if a.len() != dim {
                        return Err(Error::arg(format!(
                            "row {row:?} has {} entries, expected {dim}",
                            a.len()
                        )));
                    }
                    Ok((a, parse_rational(b, n)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ConvexBody::Polytope(HPolytope::from_rational_rows(dim, rows)?))
        }
        other => Err(Error::arg(format!("unknown body kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harper_forms() {
        let s = parse_forms("x1; x2; x1+x2", 100).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 3);
        assert_eq!(s.forms()[2].coeffs(), &[1, 1]);
    }

    #[test]
    fn coefficients_constants_and_n() {
        let s = parse_forms(" 2*x1 - 3x2 + 7 ; x1 - N - 1", 50).unwrap();
        assert_eq!(s.forms()[0].coeffs(), &[2, -3]);
        assert_eq!(s.forms()[0].constant(), 7);
        assert_eq!(s.forms()[1].coeffs(), &[1, 0]);
        assert_eq!(s.forms()[1].constant(), -51);
        let s = parse_forms("-x3 + 2N", 10).unwrap();
        assert_eq!(s.forms()[0].coeffs(), &[0, 0, -1]);
        assert_eq!(s.forms()[0].constant(), 20);
    }

    #[test]
    fn bad_forms() {
        for bad in ["", "x0", "3*", "x1 x2", "y1", "5"] {
            assert!(parse_forms(bad, 10).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn bodies() {
        let b = parse_body("box:0,N;0,N", 2, 7).unwrap();
        assert_eq!(b.lattice_point_count(), 64);
        let b = parse_body("box:1,N", 2, 3).unwrap();
        assert_eq!(b.lattice_point_count(), 9);
        let s = parse_body("simplex:1,N", 2, 3).unwrap();
        assert_eq!(s.lattice_point_count(), 3);
        let h = parse_body("hpoly:-1,0|-1; 0,-1|-1; 1,1|N", 2, 3).unwrap();
        assert_eq!(h.lattice_point_count(), 3);
        let h = parse_body("hpoly:2/3,0|2; -1,0|0; 0,1|1; 0,-1|0", 2, 3).unwrap();
        assert_eq!(h.lattice_point_count(), 8);
        assert!(parse_body("ball:1", 2, 3).is_err());
        assert!(parse_body("box:0,1;0,1;0,1", 2, 3).is_err());
        assert!(parse_body("hpoly:1,0|1", 2, 3).is_err());
    }
}
