//! Two-column `time,value` CSV traces as exported by circuit simulators.

use crate::error::{Error, Location, Result};
use crate::formats::num::fmt_f64;
use crate::formats::SignalTrace;

/// Reads a two-column CSV trace. A first line that does not parse as numbers
/// is taken to be a header and skipped.
pub fn read_csv_trace(text: &str) -> Result<SignalTrace> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut points: Vec<(f64, f64)> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(idx + 1);
            Error::parse(Location::Line(line), e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(idx + 1);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::parse(
                Location::Line(line),
                format!("expected 2 columns, found {}", record.len()),
            ));
        }
        let parsed: Option<(f64, f64)> = match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(t), Ok(v)) if t.is_finite() && v.is_finite() => Some((t, v)),
            _ => None,
        };
        let Some((t, v)) = parsed else {
            if idx == 0 {
                continue;
            }
            return Err(Error::parse(
                Location::Line(line),
                format!("non-numeric row `{},{}`", &record[0], &record[1]),
            ));
        };
        if let Some(&(prev, _)) = points.last() {
            if t <= prev {
                return Err(Error::parse(Location::Line(line), format!("time {t} does not increase past {prev}")));
            }
        }
        points.push((t, v));
    }
    if points.is_empty() {
        return Err(Error::parse(Location::Line(1), "no data rows in CSV trace"));
    }
    SignalTrace::new(points)
}

/// Writes `t,value` rows without a header.
pub fn write_csv_trace(trace: &SignalTrace) -> String {
    let mut out = String::new();
    for &(t, v) in trace.points() {
        out.push_str(&fmt_f64(t));
        out.push(',');
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_gridout_shape() {
        let tr = read_csv_trace("0,0\n0.001,0.3\n").unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr.points()[1], (0.001, 0.3));
    }

    #[test]
    fn skips_header() {
        let tr = read_csv_trace("time,v\n0,1\n1,2\n").unwrap();
        assert_eq!(tr.points(), &[(0.0, 1.0), (1.0, 2.0)]);
    }

    #[test]
    fn column_mismatch_names_line() {
        let err = read_csv_trace("0,1\n1,2,3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { location: Location::Line(2), .. }), "{err}");
    }

    #[test]
    fn non_numeric_after_header_is_an_error() {
        let err = read_csv_trace("t,v\n0,1\nfoo,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { location: Location::Line(3), .. }), "{err}");
    }

    #[test]
    fn round_trip() {
        let tr = SignalTrace::new(vec![(0.0, -1e-9), (1e-6, 0.25), (2.5, 3.0)]).unwrap();
        assert_eq!(read_csv_trace(&write_csv_trace(&tr)).unwrap(), tr);
    }
}
