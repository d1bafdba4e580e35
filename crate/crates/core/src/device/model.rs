use crate::device::{DeviceParams, Model, TeamVariant};
use crate::error::{Error, Result};
use crate::integrate::rk4_step;

/// Terminal orientation of a device. `Reverse` flips the drive seen by the
/// state equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    #[default]
    Forward,
    Reverse,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Forward => 1.0,
            Polarity::Reverse => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarity::Forward => Polarity::Reverse,
            Polarity::Reverse => Polarity::Forward,
        }
    }
}

/// The evolving part of one device.
///
/// `x` is `w / D` in `[0, 1]` for the ion drift models and meters in
/// `[x_on, x_off]` for TEAM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorState {
    pub x: f64,
    pub polarity: Polarity,
}

impl MemristorState {
    pub fn new(x: f64) -> Self {
        MemristorState {
            x,
            polarity: Polarity::Forward,
        }
    }

    pub fn with_polarity(x: f64, polarity: Polarity) -> Self {
        MemristorState { x, polarity }
    }
}

/// Resistance of the device in its current state.
pub fn memristance(state: &MemristorState, params: &DeviceParams) -> Result<f64> {
    let (lo, hi) = params.state_range();
    if !(lo..=hi).contains(&state.x) {
        return Err(Error::range(format!("state {} outside [{lo}, {hi}]", state.x)));
    }
    Ok(memristance_unchecked(state.x, params))
}

pub(crate) fn memristance_unchecked(x: f64, params: &DeviceParams) -> f64 {
    match &params.model {
        Model::LinearIonDrift(_) | Model::NonlinearIonDrift(_) => params.r_on * x + params.r_off * (1.0 - x),
        Model::Team(p) => {
            let u = (x - p.x_on) / (p.x_off - p.x_on);
            match p.variant {
                TeamVariant::LinearResistance => params.r_on + (params.r_off - params.r_on) * u,
                TeamVariant::ExponentialResistance => params.r_on * (p.lambda * u).exp(),
            }
        }
    }
}

/// Time derivative of the state, window included.
///
/// The linear and TEAM models are current controlled and read `i`; the
/// nonlinear model is voltage controlled and reads `v`.
pub fn state_derivative(state: &MemristorState, v: f64, i: f64, params: &DeviceParams) -> f64 {
    let sign = state.polarity.sign();
    let u = params.normalized(state.x);
    match &params.model {
        Model::LinearIonDrift(p) => {
            let i = sign * i;
            // dw/dt = mu_v R_on / D * i, and x = w / D.
            p.mu_v * params.r_on / (p.d * p.d) * i * params.window.value(u, i)
        }
        Model::NonlinearIonDrift(p) => {
            let v = sign * v;
            p.a * v.powi(p.m) * params.window.value(u, v)
        }
        Model::Team(p) => {
            let i = sign * i;
            if i > p.i_off {
                p.k_off * (i / p.i_off - 1.0).powf(p.alpha_off) * params.window.value(u, i)
            } else if i < p.i_on {
                p.k_on * (i / p.i_on - 1.0).powf(p.alpha_on) * params.window.value(u, i)
            } else {
                0.0
            }
        }
    }
}

/// Integrates one device over `[t, t + dt]` with the drive voltage given as a
/// function of time. The device current is recomputed from the stage state.
pub(crate) fn advance<V: Fn(f64) -> f64>(
    state: &MemristorState,
    t: f64,
    dt: f64,
    v_at: V,
    params: &DeviceParams,
) -> Result<MemristorState> {
    let polarity = state.polarity;
    let [x] = rk4_step(
        [state.x],
        t,
        dt,
        |t, y| {
            let v = v_at(t);
            let i = v / memristance_unchecked(y[0], params);
            [state_derivative(&MemristorState { x: y[0], polarity }, v, i, params)]
        },
        |y| [params.clamp_state(y[0])],
    );
    if !x.is_finite() {
        return Err(Error::Numeric(format!("state became {x} after step at t = {t}")));
    }
    Ok(MemristorState { x, polarity })
}

/// Integrates two devices in series across `v` volts over one step of `dt`.
/// Both see the same current `v / (M_a + M_b)`; each sees its own share of
/// the voltage.
pub(crate) fn advance_pair(
    a: &MemristorState,
    b: &MemristorState,
    v: f64,
    dt: f64,
    params: &DeviceParams,
) -> Result<(MemristorState, MemristorState)> {
    let [xa, xb] = rk4_step(
        [a.x, b.x],
        0.0,
        dt,
        |_, y| {
            let (ma, mb) = (memristance_unchecked(y[0], params), memristance_unchecked(y[1], params));
            let i = v / (ma + mb);
            [
                state_derivative(&MemristorState { x: y[0], polarity: a.polarity }, i * ma, i, params),
                state_derivative(&MemristorState { x: y[1], polarity: b.polarity }, i * mb, i, params),
            ]
        },
        |y| [params.clamp_state(y[0]), params.clamp_state(y[1])],
    );
    if !(xa.is_finite() && xb.is_finite()) {
        return Err(Error::Numeric(format!("series pair state became ({xa}, {xb})")));
    }
    Ok((
        MemristorState { x: xa, polarity: a.polarity },
        MemristorState { x: xb, polarity: b.polarity },
    ))
}

/// One fixed step of classical RK4 under a constant drive voltage, clamped to
/// the legal state range.
pub fn step_state(state: &MemristorState, v_drive: f64, dt: f64, params: &DeviceParams) -> Result<MemristorState> {
    if !(dt > 0.0) {
        return Err(Error::argument(format!("time step must be positive, got {dt}")));
    }
    advance(state, 0.0, dt, |_| v_drive, params)
}
