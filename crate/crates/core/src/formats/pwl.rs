//! PWL trace files: one `time value` pair per line.
//!
//! Space or tab separated on input (Octave's `save -ascii` output reads fine);
//! written with a single space and shortest round-trip decimals.

use crate::error::{Error, Location, Result};
use crate::formats::num::fmt_f64;
use crate::formats::SignalTrace;

pub fn read_pwl(text: &str) -> Result<SignalTrace> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                Location::Line(lineno),
                format!("expected `time value`, found {} fields", fields.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(Location::Line(lineno), format!("`{s}` is not a finite number")))
        };
        let (t, v) = (parse(fields[0])?, parse(fields[1])?);
        if let Some(&(prev, _)) = points.last() {
            if t <= prev {
                return Err(Error::parse(
                    Location::Line(lineno),
                    format!("time {t} does not increase past {prev}"),
                ));
            }
        }
        points.push((t, v));
    }
    if points.is_empty() {
        return Err(Error::parse(Location::Line(1), "no breakpoints in PWL text"));
    }
    SignalTrace::new(points)
}

pub fn write_pwl(trace: &SignalTrace) -> String {
    let mut out = String::with_capacity(trace.len() * 24);
    for &(t, v) in trace.points() {
        out.push_str(&fmt_f64(t));
        out.push(' ');
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}
