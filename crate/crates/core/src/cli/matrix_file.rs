//! Plain-text matrix files: one row per line, comma-separated, no header.
//!
//! Values are integers, decimals (`0.25`, `1e-3`) or exact rationals
//! (`p/q`, `q > 0`). A file with only integers and rationals is read in
//! exact mode; any decimal switches the whole file to float mode.

use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::qcore::{validate_space, AnySpace, Rational, Scalar, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: cannot parse {token:?} as a number")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Decimal(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64(),
            Value::Decimal(x) => *x,
        }
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn strip_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

/// Split a decimal literal into mantissa digits, fractional digit count and
/// exponent. Returns `None` if `body` (unsigned) is not a decimal.
fn decimal_parts(body: &str) -> Option<(String, usize, i64)> {
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let (neg, exp) = strip_sign(&body[pos + 1..]);
            if !is_digits(exp) {
                return None;
            }
            let e: i64 = exp.parse().ok()?;
            (&body[..pos], if neg { -e } else { e })
        }
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !(int.is_empty() || is_digits(int)) || !(frac.is_empty() || is_digits(frac)) {
        return None;
    }
    Some((format!("{int}{frac}"), frac.len(), exponent))
}

/// Parse one token under the grammar above.
pub fn parse_value(token: &str) -> Option<Value> {
    let t = token.trim();
    let (neg, body) = strip_sign(t);
    if let Some((p, q)) = body.split_once('/') {
        if !is_digits(p) || !is_digits(q) {
            return None;
        }
        let (p, q): (BigInt, BigInt) = (p.parse().ok()?, q.parse().ok()?);
        if q.is_zero() {
            return None;
        }
        let r = Rational::new(if neg { -p } else { p }, q);
        return Some(Value::Exact(r));
    }
    if is_digits(body) {
        let p: BigInt = body.parse().ok()?;
        return Some(Value::Exact(Rational::from_integer(if neg {
            -p
        } else {
            p
        })));
    }
    decimal_parts(body)?;
    let x: f64 = t.parse().ok()?;
    x.is_finite().then_some(Value::Decimal(x))
}

/// Exact value of a token, reading decimals digit by digit (`0.1` is `1/10`).
pub fn parse_exact(token: &str) -> Option<Rational> {
    match parse_value(token)? {
        Value::Exact(r) => Some(r),
        Value::Decimal(_) => {
            let (neg, body) = strip_sign(token.trim());
            let (digits, frac, exp) = decimal_parts(body)?;
            if exp.unsigned_abs() > 10_000 {
                return None;
            }
            let m: BigInt = digits.parse().ok()?;
            let shift = exp - frac as i64;
            let ten = BigInt::from(10);
            let r = if shift >= 0 {
                Rational::from_integer(m * Pow::pow(&ten, shift as u64))
            } else {
                Rational::new(m, Pow::pow(&ten, (-shift) as u64))
            };
            Some(if neg { -r } else { r })
        }
    }
}

/// A parsed grid, before validation.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

impl Grid {
    pub fn into_space(self, labels: Option<Vec<String>>) -> Result<AnySpace, SpaceError> {
        Ok(match self {
            Grid::Exact(rows) => validate_space(rows, labels)?.into(),
            Grid::Float(rows) => validate_space(rows, labels)?.into(),
        })
    }
}

pub fn parse_matrix(text: &str) -> Result<Grid, ParseError> {
    let mut rows: Vec<Vec<Value>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(col, tok)| {
                parse_value(tok).ok_or_else(|| ParseError {
                    line: ln + 1,
                    column: col + 1,
                    token: tok.trim().to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let float = rows
        .iter()
        .flatten()
        .any(|v| matches!(v, Value::Decimal(_)));
    Ok(if float {
        Grid::Float(
            rows.iter()
                .map(|r| r.iter().map(Value::to_f64).collect())
                .collect(),
        )
    } else {
        Grid::Exact(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|v| match v {
                            Value::Exact(x) => x,
                            Value::Decimal(_) => unreachable!("checked above"),
                        })
                        .collect()
                })
                .collect(),
        )
    })
}

pub fn format_matrix<S: Scalar>(rows: &[Vec<S>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(Scalar::to_token).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
