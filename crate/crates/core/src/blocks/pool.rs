use crate::error::{Error, Result};

/// Diode-OR max selector: the output follows the largest input but never
/// drops below `diode_threshold`.
pub fn max_pool_block(v_inputs: &[f64], diode_threshold: f64) -> Result<f64> {
    if v_inputs.is_empty() {
        return Err(Error::argument("max pool needs at least one input"));
    }
    if !(diode_threshold >= 0.0) {
        return Err(Error::argument(format!("diode threshold must be non-negative, got {diode_threshold}")));
    }
    Ok(v_inputs.iter().copied().fold(diode_threshold, f64::max))
}
