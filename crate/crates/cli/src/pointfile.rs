//! Text format for point sets.
//!
//! Line 1 is the header `d n`; each of the following `n` data lines holds
//! `d` whitespace-separated coordinates in `[0, 1]`. Lines whose first
//! non-whitespace character is `#` are comments and blank lines are
//! ignored. Coordinates accept ordinary decimal literals as well as
//! hexadecimal float literals (`0x1.8p-1`), so fixtures can pin exact bit
//! patterns. Values are written back with the shortest decimal
//! representation that round-trips, so write -> parse is bit-exact.

use std::fmt::Write as _;

use dispersion::{Point, PointSet};

#[derive(Debug)]
pub enum ParseError {
    Io(std::io::Error),
    Syntax(String),
    Domain(dispersion::Error),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Io(e) => write!(f, "io error: {e}"),
            ParseError::Syntax(s) => write!(f, "syntax error: {s}"),
            ParseError::Domain(e) => write!(f, "invalid point data: {e}"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Parses a decimal or hexadecimal floating-point literal.
pub fn parse_float_literal(token: &str) -> Option<f64> {
    let t = token.trim();
    let (negative, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = if let Some(hex) = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X")) {
        parse_hex_float(hex)?
    } else {
        rest.parse::<f64>().ok()?
    };
    Some(if negative { -value } else { value })
}

/// Parses the body of a hex float: `hexdigits[.hexdigits]p[+-]dec`.
fn parse_hex_float(body: &str) -> Option<f64> {
    let p_pos = body.find(['p', 'P'])?;
    let (mantissa_str, exp_str) = body.split_at(p_pos);
    let exponent: i32 = exp_str[1..].parse().ok()?;

    let (int_part, frac_part) = match mantissa_str.find('.') {
        Some(dot) => (&mantissa_str[..dot], &mantissa_str[dot + 1..]),
        None => (mantissa_str, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut mantissa: u128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        let digit = c.to_digit(16)? as u128;
        mantissa = mantissa.checked_mul(16)?.checked_add(digit)?;
    }
    let scale = exponent - 4 * frac_part.len() as i32;
    Some(mantissa as f64 * (scale as f64).exp2())
}

/// Reads a point set from the text format.
pub fn parse_point_set(input: &str) -> Result<PointSet, ParseError> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let header = lines
        .next()
        .ok_or_else(|| ParseError::Syntax("missing 'd n' header".into()))?;
    let mut tok = header.split_whitespace();
    let d: usize = tok
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ParseError::Syntax(format!("bad header '{header}'")))?;
    let n: usize = tok
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ParseError::Syntax(format!("bad header '{header}'")))?;
    if tok.next().is_some() {
        return Err(ParseError::Syntax(
            "trailing tokens after 'd n' header".into(),
        ));
    }

    let mut points = Vec::with_capacity(n);
    for (row, line) in lines.enumerate() {
        if row >= n {
            return Err(ParseError::Syntax(format!(
                "more than the declared {n} data lines"
            )));
        }
        let coords = line
            .split_whitespace()
            .map(|tok| {
                parse_float_literal(tok).ok_or_else(|| {
                    ParseError::Syntax(format!("bad number '{tok}' on line {}", row + 2))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if coords.len() != d {
            return Err(ParseError::Syntax(format!(
                "line {} has {} coordinates, expected {d}",
                row + 2,
                coords.len()
            )));
        }
        points.push(Point::new(coords).map_err(ParseError::Domain)?);
    }
    if points.len() != n {
        return Err(ParseError::Syntax(format!(
            "header declared {n} points but found {}",
            points.len()
        )));
    }
    PointSet::new(d, points).map_err(ParseError::Domain)
}

pub fn read_point_set(path: &std::path::Path) -> Result<PointSet, ParseError> {
    let text = std::fs::read_to_string(path).map_err(ParseError::Io)?;
    parse_point_set(&text)
}

/// Renders the text format, optionally with a leading comment.
pub fn format_point_set(t: &PointSet, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{} {}", t.dim(), t.len());
    for p in t.iter() {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
