use crate::error::{Error, Result};

/// Piecewise-linear time series: `(t, value)` breakpoints with strictly
/// increasing times and linear interpolation between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrace {
    points: Vec<(f64, f64)>,
    unit: String,
}

impl SignalTrace {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_unit(points, "")
    }

    pub fn with_unit(points: Vec<(f64, f64)>, unit: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::argument("a signal trace needs at least one breakpoint"));
        }
        for (k, &(t, v)) in points.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::Numeric(format!("breakpoint {k} is ({t}, {v})")));
            }
            if k > 0 && t <= points[k - 1].0 {
                return Err(Error::argument(format!(
                    "breakpoint times must increase strictly: t[{}] = {} then t[{k}] = {t}",
                    k - 1,
                    points[k - 1].0
                )));
            }
        }
        Ok(SignalTrace {
            points,
            unit: unit.into(),
        })
    }

    /// Breakpoints at `t0, t0 + dt, ...` carrying `values`.
    pub fn uniform(t0: f64, dt: f64, values: &[f64]) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::argument(format!("sample spacing must be positive, got {dt}")));
        }
        Self::new(values.iter().enumerate().map(|(k, &v)| (t0 + k as f64 * dt, v)).collect())
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.points[0].0
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Linear interpolation at `t`; `None` outside the breakpoint span.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if t < self.start() || t > self.end() {
            return None;
        }
        // First breakpoint with time > t.
        let idx = self.points.partition_point(|p| p.0 <= t);
        if idx == 0 {
            return Some(self.points[0].1);
        }
        let (t0, v0) = self.points[idx - 1];
        if t == t0 || idx == self.points.len() {
            return Some(v0);
        }
        let (t1, v1) = self.points[idx];
        Some(v0 + (t - t0) / (t1 - t0) * (v1 - v0))
    }

    /// Like [`SignalTrace::value_at`] but holds the end values outside the span.
    pub fn value_at_clamped(&self, t: f64) -> f64 {
        self.value_at(t.clamp(self.start(), self.end())).unwrap_or(self.points[0].1)
    }

    /// Drops interior breakpoints that lie on the segment joining their
    /// neighbours to within `tol` (absolute, in value units).
    pub fn thin(&self, tol: f64) -> SignalTrace {
        if self.points.len() <= 2 {
            return self.clone();
        }
        let mut kept = vec![self.points[0]];
        for k in 1..self.points.len() - 1 {
            let (ta, va) = *kept.last().unwrap();
            let (tb, vb) = self.points[k];
            let (tc, vc) = self.points[k + 1];
            let predicted = va + (tb - ta) / (tc - ta) * (vc - va);
            if (predicted - vb).abs() > tol {
                kept.push((tb, vb));
            }
        }
        kept.push(*self.points.last().unwrap());
        SignalTrace {
            points: kept,
            unit: self.unit.clone(),
        }
    }
}

/// Samples `trace` at `t0 + k dt` for `k in 0..n` by linear interpolation.
///
/// Sample times are allowed to overshoot the final breakpoint by a few ulps of
/// accumulated rounding; anything further is a range error.
pub fn resample(trace: &SignalTrace, t0: f64, dt: f64, n: usize) -> Result<Vec<f64>> {
    if n > 1 && !(dt > 0.0) {
        return Err(Error::argument(format!("sample spacing must be positive, got {dt}")));
    }
    let slack = 1e-9 * dt.abs().max(f64::MIN_POSITIVE) + 4.0 * f64::EPSILON * trace.end().abs().max(trace.start().abs());
    (0..n)
        .map(|k| {
            let t = t0 + k as f64 * dt;
            if t < trace.start() - slack || t > trace.end() + slack {
                return Err(Error::range(format!(
                    "sample time {t} outside trace span [{}, {}]",
                    trace.start(),
                    trace.end()
                )));
            }
            Ok(trace.value_at_clamped(t))
        })
        .collect()
}
