//! Shortest round-trip decimal formatting for `f64`.

/// Formats `x` with the fewest digits that parse back to the same bits.
///
/// Plain positional notation is used for moderate magnitudes and scientific
/// notation otherwise, so tiny device constants do not turn into long runs of
/// zeros.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
