use crate::device::{advance, memristance, MemristorState};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::formats::SignalTrace;

/// Default integration step, 10 µs.
pub const DEFAULT_DT: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSample {
    pub t: f64,
    pub v: f64,
    pub i: f64,
    pub x: f64,
    pub memristance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTrace {
    pub samples: Vec<SimSample>,
}

impl SimTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&SimSample> {
        self.samples.last()
    }

    /// Area enclosed by the I-V curve over samples with `t` in `[t_from, t_to]`,
    /// closing the polygon back to the first point.
    pub fn loop_area(&self, t_from: f64, t_to: f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|s| s.t >= t_from && s.t <= t_to)
            .map(|s| (s.v, s.i))
            .collect();
        if pts.len() < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for k in 0..pts.len() {
            let (v0, i0) = pts[k];
            let (v1, i1) = pts[(k + 1) % pts.len()];
            twice += v0 * i1 - v1 * i0;
        }
        0.5 * twice.abs()
    }

    /// Writes `t,v,i,x,memristance` rows with a header line.
    pub fn to_csv(&self) -> String {
        use crate::formats::num::fmt_f64;
        let mut out = String::from("t,v,i,x,memristance\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(s.t),
                fmt_f64(s.v),
                fmt_f64(s.i),
                fmt_f64(s.x),
                fmt_f64(s.memristance)
            ));
        }
        out
    }
}

/// Simulates one device driven by a voltage given as a function of time,
/// sampling every `dt` over `[t_start, t_end]`.
pub fn simulate_fn<V: Fn(f64) -> f64>(
    params: &DeviceParams,
    initial: MemristorState,
    t_start: f64,
    t_end: f64,
    dt: f64,
    v_at: V,
) -> Result<SimTrace> {
    params.validate()?;
    if !(dt > 0.0) {
        return Err(Error::argument(format!("time step must be positive, got {dt}")));
    }
    if !(t_end >= t_start) {
        return Err(Error::argument(format!("end time {t_end} precedes start {t_start}")));
    }
    let steps = ((t_end - t_start) / dt + 1e-9).floor() as usize;
    let mut state = initial;
    let mut samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = t_start + k as f64 * dt;
        let v = v_at(t);
        let m = memristance(&state, params)?;
        samples.push(SimSample {
            t,
            v,
            i: v / m,
            x: state.x,
            memristance: m,
        });
        if k < steps {
            state = advance(&state, t, dt, &v_at, params)?;
        }
    }
    Ok(SimTrace { samples })
}

/// Simulates one device under a piecewise-linear voltage drive.
pub fn simulate_drive(params: &DeviceParams, initial_x: f64, drive: &SignalTrace, dt: f64) -> Result<SimTrace> {
    if drive.is_empty() {
        return Err(Error::argument("drive trace is empty"));
    }
    simulate_fn(
        params,
        MemristorState::new(initial_x),
        drive.start(),
        drive.end(),
        dt,
        |t| drive.value_at_clamped(t),
    )
}

/// Drive waveforms used by sweeps and the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Waveform {
    Sine { amplitude: f64, frequency: f64 },
    /// Rectangular pulses of `amplitude` for `width` seconds every `period`.
    Pulses { amplitude: f64, width: f64, period: f64 },
    Dc { level: f64 },
}

impl Waveform {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sine { amplitude, frequency } => amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin(),
            Waveform::Pulses { amplitude, width, period } => {
                if t.rem_euclid(period) < width {
                    amplitude
                } else {
                    0.0
                }
            }
            Waveform::Dc { level } => level,
        }
    }

    /// Piecewise-linear rendering with `points_per_second` breakpoints per
    /// second (pulses additionally get their edges).
    pub fn to_trace(&self, duration: f64, points_per_second: f64) -> Result<SignalTrace> {
        if !(duration > 0.0 && points_per_second > 0.0) {
            return Err(Error::argument("duration and sampling density must be positive"));
        }
        let n = (duration * points_per_second).ceil().max(1.0) as usize;
        let dt = duration / n as f64;
        match *self {
            Waveform::Pulses { amplitude, width, period } => {
                if !(width > 0.0 && period > width) {
                    return Err(Error::argument("pulse train needs 0 < width < period"));
                }
                // Rise and fall within 1% of the width so PWL edges stay steep.
                let edge = 0.01 * width;
                let mut pts = vec![];
                let mut start = 0.0;
                while start < duration {
                    pts.push((start, 0.0));
                    pts.push((start + edge, amplitude));
                    pts.push((start + width - edge, amplitude));
                    pts.push((start + width, 0.0));
                    start += period;
                }
                pts.retain(|p| p.0 <= duration);
                if pts.last().map(|p| p.0) != Some(duration) {
                    pts.push((duration, 0.0));
                }
                SignalTrace::with_unit(pts, "V")
            }
            _ => SignalTrace::with_unit((0..=n).map(|k| (k as f64 * dt, self.value(k as f64 * dt))).collect(), "V"),
        }
    }
}
