//! Four-memristor bridge synapse: weight readout and pulse programming.
//!
//! The bridge is two anti-serial pairs (M1, M2) and (M3, M4) driven by the
//! same input. M1 and M3 face forward and M2 and M4 face backward, so with
//! the ion drift models a positive programming pulse lowers M1 and M3, raises
//! M2 and M4, and pushes the weight `M2/(M1+M2) - M3/(M3+M4)` upward.

use crate::device::{advance_pair, memristance_unchecked, DeviceParams, MemristorState, Polarity, DEFAULT_DT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeSynapse {
    pub params: DeviceParams,
    pub m1: MemristorState,
    pub m2: MemristorState,
    pub m3: MemristorState,
    pub m4: MemristorState,
    /// Default amplitude used when programming toward a target weight.
    pub programming_amplitude: f64,
}

impl BridgeSynapse {
    /// All four devices at mid-range, giving weight 0.
    pub fn balanced(params: DeviceParams) -> Self {
        let (lo, hi) = params.state_range();
        Self::from_states(params, [0.5 * (lo + hi); 4])
    }

    /// Builds a bridge from raw states `[x1, x2, x3, x4]` with the standard
    /// orientation.
    pub fn from_states(params: DeviceParams, x: [f64; 4]) -> Self {
        BridgeSynapse {
            params,
            m1: MemristorState::with_polarity(x[0], Polarity::Forward),
            m2: MemristorState::with_polarity(x[1], Polarity::Reverse),
            m3: MemristorState::with_polarity(x[2], Polarity::Forward),
            m4: MemristorState::with_polarity(x[3], Polarity::Reverse),
            programming_amplitude: 1.0,
        }
    }

    /// Current memristances `[M1, M2, M3, M4]`.
    pub fn memristances(&self) -> [f64; 4] {
        [self.m1, self.m2, self.m3, self.m4].map(|s| memristance_unchecked(s.x, &self.params))
    }

    /// Largest weight magnitude any bridge built from these devices can hold.
    pub fn max_weight(&self) -> f64 {
        max_bridge_weight(&self.params)
    }
}

/// `(r_off - r_on) / (r_off + r_on)`.
pub fn max_bridge_weight(params: &DeviceParams) -> f64 {
    (params.r_off - params.r_on) / (params.r_off + params.r_on)
}

/// Weight from four memristances.
pub fn weight_from_memristances(m: [f64; 4]) -> f64 {
    m[1] / (m[0] + m[1]) - m[2] / (m[2] + m[3])
}

pub fn bridge_weight(synapse: &BridgeSynapse) -> f64 {
    weight_from_memristances(synapse.memristances())
}

/// Output voltage for input `v_in`. Reading never disturbs the devices.
pub fn bridge_apply(synapse: &BridgeSynapse, v_in: f64) -> f64 {
    bridge_weight(synapse) * v_in
}

/// Applies one rectangular programming pulse of `amplitude` volts lasting
/// `pulse_width` seconds, integrated with step `dt`.
pub fn program_bridge(synapse: &BridgeSynapse, pulse_width: f64, amplitude: f64, dt: f64) -> Result<BridgeSynapse> {
    if !(pulse_width >= 0.0) || !pulse_width.is_finite() {
        return Err(Error::argument(format!("pulse width must be non-negative, got {pulse_width}")));
    }
    if !(dt > 0.0) {
        return Err(Error::argument(format!("time step must be positive, got {dt}")));
    }
    synapse.params.validate()?;
    let full = (pulse_width / dt).floor();
    let rest = pulse_width - full * dt;
    let mut s = *synapse;
    for _ in 0..full as u64 {
        s = step_bridge(&s, amplitude, dt)?;
    }
    if rest > 0.0 {
        s = step_bridge(&s, amplitude, rest)?;
    }
    Ok(s)
}

fn step_bridge(s: &BridgeSynapse, amplitude: f64, dt: f64) -> Result<BridgeSynapse> {
    let (m1, m2) = advance_pair(&s.m1, &s.m2, amplitude, dt, &s.params)?;
    let (m3, m4) = advance_pair(&s.m3, &s.m4, amplitude, dt, &s.params)?;
    Ok(BridgeSynapse { m1, m2, m3, m4, ..*s })
}

/// Pulse timing that takes a bridge to a requested weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgrammingPlan {
    /// Pulse duration in seconds, negative when the pulse must use the
    /// opposite polarity of the programming amplitude.
    pub width: f64,
    /// Integration step used while searching.
    pub dt: f64,
}

impl ProgrammingPlan {
    /// Applies the plan to `synapse` with programming amplitude magnitude `amplitude`.
    pub fn apply(&self, synapse: &BridgeSynapse, amplitude: f64) -> Result<BridgeSynapse> {
        let v = amplitude.abs() * if self.width < 0.0 { -1.0 } else { 1.0 };
        program_bridge(synapse, self.width.abs(), v, self.dt)
    }
}

/// Tolerance the search for a target weight guarantees.
pub const WEIGHT_TOLERANCE: f64 = 0.01;

const BISECTION_LIMIT: usize = 60;

/// Signed pulse width that moves `synapse` to `target_w`, in seconds.
///
/// The sign says which polarity of `amplitude` to apply; see
/// [`ProgrammingPlan::apply`].
pub fn program_to_weight(synapse: &BridgeSynapse, target_w: f64, amplitude: f64) -> Result<f64> {
    Ok(plan_weight(synapse, target_w, amplitude, DEFAULT_DT)?.width)
}

/// Marches in steps of `dt` until the weight crosses `target_w`, then bisects
/// the last partial step.
pub fn plan_weight(synapse: &BridgeSynapse, target_w: f64, amplitude: f64, dt: f64) -> Result<ProgrammingPlan> {
    let w_max = synapse.max_weight();
    if !target_w.is_finite() || target_w.abs() > w_max {
        return Err(Error::range(format!("target weight {target_w} outside realizable range ±{w_max}")));
    }
    if !(amplitude.abs() > 0.0) || !amplitude.is_finite() {
        return Err(Error::argument(format!("programming amplitude must be nonzero, got {amplitude}")));
    }
    if !(dt > 0.0) {
        return Err(Error::argument(format!("time step must be positive, got {dt}")));
    }
    synapse.params.validate()?;

    let w0 = bridge_weight(synapse);
    if (w0 - target_w).abs() <= f64::EPSILON {
        return Ok(ProgrammingPlan { width: 0.0, dt });
    }
    let direction = if target_w > w0 { 1.0 } else { -1.0 };
    let v = amplitude.abs() * direction * raising_polarity(&synapse.params);
    let past = |w: f64| (w - target_w) * direction >= 0.0;

    let mut s = *synapse;
    let mut w = w0;
    let mut steps: u64 = 0;
    loop {
        let next = step_bridge(&s, v, dt)?;
        let wn = bridge_weight(&next);
        if past(wn) {
            break;
        }
        if (wn - w) * direction <= 0.0 {
            // Saturated or frozen below a threshold: more time will not help.
            return Err(Error::range(format!(
                "weight stalls at {wn} before reaching {target_w} with {v} V pulses"
            )));
        }
        s = next;
        w = wn;
        steps += 1;
    }

    // Target lies inside the next step; bisect its length.
    let (mut lo, mut hi) = (0.0, dt);
    for _ in 0..BISECTION_LIMIT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let wm = bridge_weight(&step_bridge(&s, v, mid)?);
        if past(wm) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let w_lo = if lo > 0.0 { bridge_weight(&step_bridge(&s, v, lo)?) } else { w };
    let w_hi = bridge_weight(&step_bridge(&s, v, hi)?);
    let partial = if (w_lo - target_w).abs() <= (w_hi - target_w).abs() { lo } else { hi };
    let width = steps as f64 * dt + partial;
    Ok(ProgrammingPlan {
        width: v.signum() * width,
        dt,
    })
}

/// Sign of the pulse that raises the weight: positive drive grows the state,
/// which lowers resistance for the ion drift models and raises it for TEAM.
pub fn raising_polarity(params: &DeviceParams) -> f64 {
    let (lo, hi) = params.state_range();
    if memristance_unchecked(hi, params) < memristance_unchecked(lo, params) {
        1.0
    } else {
        -1.0
    }
}

/// Nearest weight a balanced bridge of `params` reaches when programmed
/// toward `w` with `amplitude` volt pulses.
pub fn quantize_weight(params: &DeviceParams, w: f64, amplitude: f64) -> Result<f64> {
    let start = BridgeSynapse::balanced(*params);
    let plan = plan_weight(&start, w, amplitude, DEFAULT_DT)?;
    Ok(bridge_weight(&plan.apply(&start, amplitude)?))
}
