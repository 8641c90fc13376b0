//! Plain-text matrix dumps: a `"<n> <kind>"` header, then `n` lines of `n`
//! space-separated entries. Rationals are written `p/q` (or `p` when
//! integral); feature vectors as comma-joined components.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{FeatureVec, Matrix, PathMatrix, Scalar};
use crate::error::{Error, Result, ScalarKind};

fn dump_err(line: usize, reason: impl Into<String>) -> Error {
    Error::MatrixDump {
        line,
        reason: reason.into(),
    }
}

fn write_rows<T: Scalar>(out: &mut String, m: &Matrix<T>, fmt: impl Fn(&T) -> String) {
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(&fmt).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn dump_matrix(m: &PathMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.n(), m.kind());
    match m {
        PathMatrix::BigInt(m) => write_rows(&mut out, m, BigInt::to_string),
        PathMatrix::Rational(m) => write_rows(&mut out, m, BigRational::to_string),
        PathMatrix::Float(m) => write_rows(&mut out, m, f64::to_string),
        PathMatrix::FeatureVec(m) => write_rows(&mut out, m, |v| {
            v.0.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
        }),
    }
    out
}

fn parse_bigint(tok: &str, line: usize) -> Result<BigInt> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(dump_err(line, format!("'{tok}' is not an integer")));
    }
    tok.parse()
        .map_err(|_| dump_err(line, format!("'{tok}' is not an integer")))
}

fn parse_rational(tok: &str, line: usize) -> Result<BigRational> {
    match tok.split_once('/') {
        None => Ok(BigRational::from_integer(parse_bigint(tok, line)?)),
        Some((p, q)) => {
            let q = parse_bigint(q, line)?;
            if num_traits::Zero::is_zero(&q) {
                return Err(dump_err(line, format!("'{tok}' has a zero denominator")));
            }
            Ok(BigRational::new(parse_bigint(p, line)?, q))
        }
    }
}

fn parse_float(tok: &str, line: usize) -> Result<f64> {
    tok.parse()
        .map_err(|_| dump_err(line, format!("'{tok}' is not a number")))
}

fn parse_rows<T: Scalar>(
    n: usize,
    rows: &[(usize, &str)],
    shape: impl Fn(&T) -> T::Shape,
    parse: impl Fn(&str, usize) -> Result<T>,
) -> Result<Matrix<T>> {
    let mut parsed = Vec::with_capacity(rows.len());
    let mut common = None;
    for &(line, text) in rows {
        let row: Vec<T> = text
            .split_whitespace()
            .map(|tok| parse(tok, line))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(dump_err(
                line,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        for x in &row {
            let s = shape(x);
            match common {
                None => common = Some(s),
                Some(c) if c != s => {
                    return Err(dump_err(line, "entries have different dimensions"))
                }
                Some(_) => {}
            }
        }
        parsed.push(row);
    }
    match common {
        Some(s) => Matrix::from_rows(s, parsed),
        None => Err(dump_err(
            1,
            "cannot infer the entry shape of an empty matrix",
        )),
    }
}

pub fn parse_matrix_dump(text: &str) -> Result<PathMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, header) = lines.next().ok_or_else(|| dump_err(1, "missing header"))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| dump_err(1, "header must start with the dimension"))?;
    let kind: ScalarKind = parts
        .next()
        .ok_or_else(|| dump_err(1, "header is missing the kind"))?
        .parse()
        .map_err(|e: Error| dump_err(1, e.to_string()))?;
    if parts.next().is_some() {
        return Err(dump_err(1, "unexpected tokens after the kind"));
    }
    let mut rows: Vec<(usize, &str)> = lines.collect();
    while rows.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        rows.pop();
    }
    if rows.len() != n {
        return Err(dump_err(
            rows.last().map_or(1, |r| r.0),
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    if n == 0 {
        return Ok(match kind {
            ScalarKind::BigInt => PathMatrix::BigInt(Matrix::zeros(0, ())),
            ScalarKind::Rational => PathMatrix::Rational(Matrix::zeros(0, ())),
            ScalarKind::Float => PathMatrix::Float(Matrix::zeros(0, ())),
            ScalarKind::FeatureVec => {
                return Err(dump_err(1, "an empty feature matrix has no dimension"))
            }
        });
    }
    Ok(match kind {
        ScalarKind::BigInt => PathMatrix::BigInt(parse_rows(n, &rows, |_| (), parse_bigint)?),
        ScalarKind::Rational => PathMatrix::Rational(parse_rows(n, &rows, |_| (), parse_rational)?),
        ScalarKind::Float => PathMatrix::Float(parse_rows(n, &rows, |_| (), parse_float)?),
        ScalarKind::FeatureVec => {
            PathMatrix::FeatureVec(parse_rows(n, &rows, FeatureVec::dim, |tok, line| {
                tok.split(',')
                    .map(|c| parse_float(c, line))
                    .collect::<Result<Vec<_>>>()
                    .map(FeatureVec)
            })?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_dump_round_trip() {
        let text = "2 bigint\n1 -2\n30 4\n";
        let m = parse_matrix_dump(text).unwrap();
        assert_eq!(m.kind(), ScalarKind::BigInt);
        assert_eq!(dump_matrix(&m), text);
    }

    #[test]
    fn rational_and_feature_dumps() {
        let m = parse_matrix_dump("2 rational\n1/2 3\n-4/6 0\n").unwrap();
        assert_eq!(dump_matrix(&m), "2 rational\n1/2 3\n-2/3 0\n");
        let f = parse_matrix_dump("1 featurevec\n0.5,2\n").unwrap();
        assert_eq!(f.feature_dim(), Some(2));
        assert_eq!(dump_matrix(&f), "1 featurevec\n0.5,2\n");
    }

    #[test]
    fn malformed_dumps() {
        for bad in [
            "",
            "x bigint\n",
            "2 complex\n1 2\n3 4\n",
            "2 bigint\n1 2\n",
            "2 bigint\n1 2\n3\n",
            "1 bigint\n+1\n",
            "1 rational\n1/0\n",
            "2 featurevec\n1 1,2\n1 1\n",
            "1 bigint extra\n1\n",
        ] {
            assert!(parse_matrix_dump(bad).is_err(), "{bad:?}");
        }
    }
}
