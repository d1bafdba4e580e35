//! Memristive threshold logic unit: resistance-programmed Adaline gates and
//! MR-II trial-perturbation training.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Two-input logic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    And,
    Or,
    Nand,
    Nor,
    Xor,
}

impl Gate {
    pub const LINEAR: [Gate; 4] = [Gate::And, Gate::Or, Gate::Nand, Gate::Nor];

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            Gate::And => a && b,
            Gate::Or => a || b,
            Gate::Nand => !(a && b),
            Gate::Nor => !(a || b),
            Gate::Xor => a != b,
        }
    }

    pub fn truth_table(self) -> [([bool; 2], bool); 4] {
        [[false, false], [false, true], [true, false], [true, true]].map(|x| (x, self.eval(x[0], x[1])))
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::And => "AND",
            Gate::Or => "OR",
            Gate::Nand => "NAND",
            Gate::Nor => "NOR",
            Gate::Xor => "XOR",
        }
    }
}

/// Highest and lowest memristance of the tabulated gate designs.
pub const TABLE_R_HIGH: f64 = 4.81e3;
pub const TABLE_R_LOW: f64 = 1.17e3;

/// One Adaline node: input memristances `r1`, `r2`, bias memristance `r0` and
/// the fixed resistors `r_n`, `r_f` that set the weight map
/// `w(R) = r_f / r_n - r_f / R`.
///
/// Logic levels sit `logic_swing` above (1) or below (0) `virtual_ground`;
/// the bias input is held at the high level. The output is 1 when the
/// weighted sum of the input deviations is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdalineSpec {
    pub r1: f64,
    pub r2: f64,
    pub r0: f64,
    pub virtual_ground: f64,
    pub logic_swing: f64,
    pub r_n: f64,
    pub r_f: f64,
}

impl AdalineSpec {
    /// Gate built from the given memristances. The reference resistors map
    /// the tabulated memristance window onto weights in `[-1, 1]`.
    pub fn new(r1: f64, r2: f64, r0: f64) -> Self {
        let (rh, rl) = (TABLE_R_HIGH, TABLE_R_LOW);
        AdalineSpec {
            r1,
            r2,
            r0,
            virtual_ground: 2.5,
            logic_swing: 0.1,
            r_n: 2.0 * rh * rl / (rh + rl),
            r_f: 2.0 * rh * rl / (rh - rl),
        }
    }

    /// Tabulated memristances for the four linearly separable gates.
    pub fn table(gate: Gate) -> Option<Self> {
        match gate {
            Gate::Nand => Some(Self::new(1.33e3, 1.17e3, 3.88e3)),
            Gate::Nor => Some(Self::new(1.33e3, 1.17e3, 1.33e3)),
            Gate::And => Some(Self::new(2.81e3, 4.81e3, 1.33e3)),
            Gate::Or => Some(Self::new(2.81e3, 4.81e3, 3.88e3)),
            Gate::Xor => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.r1, self.r2, self.r0, self.r_n, self.r_f, self.logic_swing];
        if all.iter().all(|&v| v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::argument("adaline resistances and logic swing must be positive"))
        }
    }

    /// Weights `[w1, w2, w0]` realized by the memristances.
    pub fn weights(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r0].map(|r| resistance_to_weight(r, self.r_n, self.r_f))
    }
}

pub fn adaline_eval(spec: &AdalineSpec, x1: bool, x2: bool) -> bool {
    let level = |bit: bool| spec.virtual_ground + if bit { spec.logic_swing } else { -spec.logic_swing };
    let [w1, w2, w0] = spec.weights();
    let v_bias = spec.virtual_ground + spec.logic_swing;
    let sum = w1 * (level(x1) - spec.virtual_ground)
        + w2 * (level(x2) - spec.virtual_ground)
        + w0 * (v_bias - spec.virtual_ground);
    sum > 0.0
}

/// Reference resistors that map the memristance window
/// `[r_m_low, r_m_high]` onto the weight range `[g_low, g_high]`:
///
/// ```text
/// r_n = R_H - R_H G_H (R_H - R_L) / (R_H G_H - R_L G_L)
/// r_f = r_n (R_H G_H - R_L G_L) / (R_H - R_L)
/// ```
///
/// so that `w(R_H) = G_H` and `w(R_L) = G_L` under
/// `w(R) = r_f / r_n - r_f / R`.
pub fn weights_to_resistances(g_high: f64, g_low: f64, r_m_high: f64, r_m_low: f64) -> Result<(f64, f64)> {
    if !(r_m_high > r_m_low && r_m_low > 0.0) {
        return Err(Error::argument(format!("need r_m_high > r_m_low > 0, got {r_m_high}, {r_m_low}")));
    }
    if !(g_high.is_finite() && g_low.is_finite()) || g_high < g_low {
        return Err(Error::argument(format!("need g_high >= g_low, got {g_high}, {g_low}")));
    }
    let (rh, rl) = (r_m_high, r_m_low);
    let d = rh * g_high - rl * g_low;
    let r_n = rh - rh * g_high * (rh - rl) / d;
    let r_f = r_n * d / (rh - rl);
    if !(r_n > 0.0 && r_f > 0.0) || !r_n.is_finite() || !r_f.is_finite() {
        return Err(Error::range(format!(
            "weights [{g_low}, {g_high}] are not realizable over [{rl}, {rh}] ohms (r_n = {r_n}, r_f = {r_f})"
        )));
    }
    Ok((r_n, r_f))
}

/// `r_f / r_n - r_f / r`.
pub fn resistance_to_weight(r: f64, r_n: f64, r_f: f64) -> f64 {
    r_f / r_n - r_f / r
}

/// Memristance that realizes weight `w`, the inverse of [`resistance_to_weight`].
pub fn weight_to_resistance(w: f64, r_n: f64, r_f: f64) -> Result<f64> {
    let g = 1.0 / r_n - w / r_f;
    if g > 0.0 {
        Ok(1.0 / g)
    } else {
        Err(Error::range(format!("weight {w} needs a non-positive resistance")))
    }
}

/// Outcome of an MR-II run.
#[derive(Debug, Clone, PartialEq)]
pub struct Mr2Run {
    pub weights: [f64; 3],
    pub iterations: usize,
    /// Error count before the first trial and after every trial.
    pub error_history: Vec<usize>,
}

pub const MR2_INITIAL_STEP: f64 = 0.1;
pub const MR2_GROWTH: f64 = 1.5;
pub const MR2_STALL_LIMIT: usize = 50;

fn bipolar(bit: bool) -> f64 {
    if bit {
        1.0
    } else {
        -1.0
    }
}

/// Hard-limited output of weights `[w1, w2, w0]` on bipolar inputs with a +1 bias.
pub fn tlu_output(w: &[f64; 3], x: [bool; 2]) -> bool {
    w[0] * bipolar(x[0]) + w[1] * bipolar(x[1]) + w[2] > 0.0
}

fn errors(w: &[f64; 3], table: &[([bool; 2], bool)]) -> usize {
    table.iter().filter(|(x, want)| tlu_output(w, *x) != *want).count()
}

/// Trial-and-keep training: perturb every weight uniformly within the
/// current step, keep the trial only if it lowers the error count, and grow
/// the step after a run of rejected trials.
pub fn mr2_train(initial_weights: [f64; 3], truth_table: &[([bool; 2], bool)], seed: u64, max_iters: usize) -> Result<[f64; 3]> {
    Ok(mr2_run(initial_weights, truth_table, seed, max_iters)?.weights)
}

pub fn mr2_run(initial_weights: [f64; 3], truth_table: &[([bool; 2], bool)], seed: u64, max_iters: usize) -> Result<Mr2Run> {
    if initial_weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::argument("initial weights must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = initial_weights;
    let mut err = errors(&w, truth_table);
    let mut history = vec![err];
    let mut step = MR2_INITIAL_STEP;
    let mut stalled = 0;
    let mut iterations = 0;
    while err > 0 {
        if iterations == max_iters {
            return Err(Error::Convergence { iterations });
        }
        iterations += 1;
        let trial = w.map(|v| v + rng.gen_range(-step..=step));
        let trial_err = errors(&trial, truth_table);
        if trial_err < err {
            w = trial;
            err = trial_err;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled == MR2_STALL_LIMIT {
                step *= MR2_GROWTH;
                stalled = 0;
            }
        }
        history.push(err);
    }
    Ok(Mr2Run {
        weights: w,
        iterations,
        error_history: history,
    })
}
