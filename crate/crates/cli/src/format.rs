//! Plain-text matrix and vector-set files.
//!
//! A matrix file is a header line `d n` followed by `d` lines of `n`
//! integers. A vector-set file has header `N n` and `N` lines of `n`
//! integers, one representative per `±` pair, sorted by 1-norm and then
//! lexicographically.

use std::cmp::Ordering;
use std::fmt::Write as _;

use graver_ugb::lattice::norm_lex_cmp;
use graver_ugb::{IntMatrix, IntVector, Integer, SignedVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn numbers(line: &str, line_no: usize) -> Result<Vec<Integer>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<Integer>().map_err(|_| FormatError::Syntax {
                line: line_no,
                message: format!("not an integer: {tok:?}"),
            })
        })
        .collect()
}

fn header(line: &str, line_no: usize) -> Result<(usize, usize), FormatError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let bad = || FormatError::Syntax {
        line: line_no,
        message: format!("expected two sizes, found {line:?}"),
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
    ))
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn rows_of(text: &str) -> Result<(usize, Vec<Vec<Integer>>), FormatError> {
    let mut lines = content_lines(text);
    let (line_no, first) = lines.next().ok_or(FormatError::Empty)?;
    let (count, width) = header(first, line_no)?;
    let mut rows = Vec::with_capacity(count);
    for (line_no, line) in lines {
        let row = numbers(line, line_no)?;
        if row.len() != width {
            return Err(FormatError::Syntax {
                line: line_no,
                message: format!("expected {width} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != count {
        return Err(FormatError::Syntax {
            line: line_no,
            message: format!("header announces {count} rows, found {}", rows.len()),
        });
    }
    Ok((width, rows))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, FormatError> {
    let (width, rows) = rows_of(text)?;
    IntMatrix::from_rows(rows, width).map_err(|e| FormatError::Syntax {
        line: 1,
        message: e.to_string(),
    })
}

fn write_row<'a>(out: &mut String, row: impl IntoIterator<Item = &'a Integer>) {
    let cells: Vec<String> = row.into_iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{}", cells.join(" "));
}

pub fn print_matrix(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        write_row(&mut out, m.row(r));
    }
    out
}

/// Reads a vector set; entries are brought to canonical sign and sorted.
pub fn parse_vector_set(text: &str) -> Result<(usize, Vec<SignedVector>), FormatError> {
    let (width, rows) = rows_of(text)?;
    let vectors = rows
        .into_iter()
        .map(|r| SignedVector::new(IntVector::new(r)))
        .collect();
    Ok((width, canonical_set(vectors)))
}

/// Canonical sign representatives, deduplicated and sorted.
pub fn canonical_set(vectors: Vec<SignedVector>) -> Vec<SignedVector> {
    let mut out: Vec<SignedVector> = vectors
        .into_iter()
        .map(|v| v.canonical().expect("arbitrary precision"))
        .collect();
    out.sort_by(norm_lex_cmp);
    out.dedup_by(|a, b| norm_lex_cmp(a, b) == Ordering::Equal);
    out
}

pub fn print_vector_set(width: usize, vectors: &[SignedVector]) -> String {
    let vectors = canonical_set(vectors.to_vec());
    let mut out = format!("{} {}\n", vectors.len(), width);
    for v in &vectors {
        write_row(&mut out, v.base().iter());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use graver_ugb::{imat, svec};

    #[test]
    fn matrix_round_trip() {
        let m = imat(&[&[1, 2, 3], &[1, 1, 1]]);
        let text = print_matrix(&m);
        assert_eq!(text, "2 3\n1 2 3\n1 1 1\n");
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(parse_matrix(""), Err(FormatError::Empty));
        assert!(matches!(
            parse_matrix("2 2\n1 2\n"),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(
            parse_matrix("1 2\n1 x\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_matrix("1 2\n1 2 3\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn vector_sets_are_canonical() {
        let text = print_vector_set(2, &[svec(&[-2, 1]), svec(&[2, -1])]);
        assert_eq!(text, "1 2\n2 -1\n");
        assert_eq!(print_vector_set(2, &[]), "0 2\n");
        let (w, vs) = parse_vector_set("2 3\n0 -1 1\n1 -1 0\n").unwrap();
        assert_eq!(w, 3);
        assert_eq!(vs, vec![svec(&[0, 1, -1]), svec(&[1, -1, 0])]);
    }
}
