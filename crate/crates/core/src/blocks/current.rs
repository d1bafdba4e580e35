//! Current-mode arithmetic blocks: summing node, ReLU, squarer, divider,
//! four-quadrant multiplier and ratioed current mirrors.

use crate::error::{Error, Result};

/// Reference current of the squarer and divider cells, 250 µA. With this
/// value `i_ref^2 / 4 = 1.5625e-8 A^2`.
pub const DEFAULT_I_REF: f64 = 250e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockMode {
    #[default]
    Ideal,
    Nonideal,
}

/// Operating limits of the transistor-level cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockNonideality {
    pub mode: BlockMode,
    /// Below this input the squarer's output collapses to zero.
    pub squarer_min_input: f64,
    /// Above this input the divider stops working.
    pub divider_max_input: f64,
}

impl BlockNonideality {
    pub const fn ideal() -> Self {
        BlockNonideality {
            mode: BlockMode::Ideal,
            squarer_min_input: 360e-6,
            divider_max_input: 300e-6,
        }
    }

    pub const fn nonideal() -> Self {
        BlockNonideality {
            mode: BlockMode::Nonideal,
            ..Self::ideal()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.squarer_min_input > 0.0 && self.divider_max_input > 0.0 {
            Ok(())
        } else {
            Err(Error::argument("block thresholds must be positive"))
        }
    }
}

impl Default for BlockNonideality {
    fn default() -> Self {
        Self::ideal()
    }
}

fn check_ref(i_ref: f64) -> Result<()> {
    if i_ref > 0.0 && i_ref.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(format!("reference current must be positive, got {i_ref}")))
    }
}

/// `Σ i_plus - Σ i_minus`.
pub fn summing(i_plus: &[f64], i_minus: &[f64]) -> f64 {
    i_plus.iter().sum::<f64>() - i_minus.iter().sum::<f64>()
}

/// Rectifier with an optional compliance ceiling.
pub fn relu(x: f64, ceiling: Option<f64>) -> f64 {
    let y = x.max(0.0);
    match ceiling {
        Some(c) => y.min(c),
        None => y,
    }
}

/// `x^2 / (4 i_ref)` for a non-negative input current.
pub fn squarer(x: f64, i_ref: f64, nonideality: &BlockNonideality) -> Result<f64> {
    check_ref(i_ref)?;
    if !(x >= 0.0) {
        return Err(Error::argument(format!("squarer input must be non-negative, got {x}")));
    }
    if nonideality.mode == BlockMode::Nonideal && x < nonideality.squarer_min_input {
        return Ok(0.0);
    }
    Ok(x * x / (4.0 * i_ref))
}

/// `i_ref^2 / (4 x)` for a positive input current.
pub fn divider(x: f64, i_ref: f64, nonideality: &BlockNonideality) -> Result<f64> {
    check_ref(i_ref)?;
    if !(x > 0.0) {
        return Err(Error::argument(format!("divider input must be positive, got {x}")));
    }
    if nonideality.mode == BlockMode::Nonideal && x > nonideality.divider_max_input {
        return Err(Error::OperatingRange(format!(
            "divider input {x} A exceeds {} A",
            nonideality.divider_max_input
        )));
    }
    Ok(i_ref * i_ref / (4.0 * x))
}

/// `i1 i2 / i_ref` built as `sq(i1 + i2) - sq(|i1 - i2|)`.
///
/// The difference leg has two mirrored paths, one per sign of `i1 - i2`; the
/// idle path carries zero. Input signs are stripped before the cell and
/// restored on the output.
pub fn multiplier(i1: f64, i2: f64, i_ref: f64, nonideality: &BlockNonideality) -> Result<f64> {
    check_ref(i_ref)?;
    if !(i1.is_finite() && i2.is_finite()) {
        return Err(Error::Numeric(format!("multiplier inputs ({i1}, {i2})")));
    }
    let sign = if (i1 < 0.0) != (i2 < 0.0) { -1.0 } else { 1.0 };
    let (a, b) = (i1.abs(), i2.abs());
    let sum = squarer(a + b, i_ref, nonideality)?;
    let forward = squarer((a - b).max(0.0), i_ref, nonideality)?;
    let reverse = squarer((b - a).max(0.0), i_ref, nonideality)?;
    Ok(sign * (sum - (forward + reverse)))
}

/// Ratioed mirror: `x * ratio`.
pub fn gain_mirror(x: f64, ratio: f64) -> Result<f64> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::argument(format!("mirror ratio must be positive, got {ratio}")));
    }
    Ok(x * ratio)
}
