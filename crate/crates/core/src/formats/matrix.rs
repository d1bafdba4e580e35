//! Whitespace-separated numeric matrices, one row per line.

use crate::error::{Error, Location, Result};
use crate::formats::num::fmt_f64;

/// Parses rows of numbers. Blank lines and `#` comments are skipped; every
/// row must have the same length.
pub fn read_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    read_matrix_lines(text.lines().enumerate().map(|(k, l)| (k + 1, l)))
}

pub(crate) fn read_matrix_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(line, lineno)?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    Location::Line(lineno),
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(Location::Line(1), "matrix has no rows"));
    }
    Ok(rows)
}

pub(crate) fn parse_row(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::parse(Location::Line(lineno), format!("`{s}` is not a finite number"))),
        })
        .collect()
}

pub(crate) fn format_row(row: &[f64]) -> String {
    row.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(" ")
}

pub fn write_matrix(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&format_row(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_kernel_layout() {
        let m = read_matrix("-0.1 -0.1 -0.1\n-0.1 0.8 -0.1\n-0.1\t-0.1 -0.1\n").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m[1], vec![-0.1, 0.8, -0.1]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = read_matrix("1 2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { location: Location::Line(2), .. }));
        assert!(read_matrix("\n# nothing\n").is_err());
        assert!(read_matrix("1 nan\n").is_err());
    }

    #[test]
    fn round_trip() {
        let m = vec![vec![1e-14, -2.5, 0.0], vec![3.0, 1.0 / 3.0, -7e20]];
        assert_eq!(read_matrix(&write_matrix(&m)).unwrap(), m);
    }
}
