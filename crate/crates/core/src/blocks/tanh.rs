//! Rational tanh block `f(x) = m x / (x^2 + c)` and its current-mode build.

use crate::blocks::current::{divider, gain_mirror, multiplier, squarer, summing, BlockNonideality};
use crate::error::{Error, Result};

/// Third-order Padé form `3x / (x^2 + 3)` in dimensionless units.
pub fn pade_tanh(x: f64) -> f64 {
    3.0 * x / (x * x + 3.0)
}

/// Closed form `m x / (x^2 + c)`.
pub fn tanh_block(x: f64, m: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::argument(format!("tanh constant c must be positive, got {c}")));
    }
    Ok(m * x / (x * x + c))
}

/// The same function assembled from squarer, divider, multipliers and
/// mirrors, with reference current `i_ref`:
///
/// 1. numerator `m x / i_ref` from a multiplier,
/// 2. denominator `(x^2 + c) / (4 i_ref)` from a squarer plus a bias current,
/// 3. a 1/5 mirror into the divider, giving `5 i_ref^3 / (x^2 + c)`,
/// 4. a second multiplier and an output mirror of `0.2 / i_ref`.
///
/// Negative inputs are folded onto the positive half and the sign restored.
pub fn tanh_block_structural(x: f64, m: f64, c: f64, i_ref: f64, nonideality: &BlockNonideality) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::argument(format!("tanh constant c must be positive, got {c}")));
    }
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let num = multiplier(m, x, i_ref, nonideality)?;
    let den = summing(&[squarer(x, i_ref, nonideality)?, c / (4.0 * i_ref)], &[]);
    let recip = divider(gain_mirror(den, 0.2)?, i_ref, nonideality)?;
    let prod = multiplier(num, recip, i_ref, nonideality)?;
    Ok(sign * gain_mirror(prod, 0.2 / i_ref)?)
}

/// Scaling seed `(3u, 3u^2)`: the Padé constants carried to a current unit `u`.
pub fn tanh_seed(unit_current: f64) -> (f64, f64) {
    (3.0 * unit_current, 3.0 * unit_current * unit_current)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhCalibration {
    pub m: f64,
    pub c: f64,
    /// Worst-case `|f(x) - tanh(x/u)|` over `|x| <= 2u`.
    pub max_error: f64,
}

const FIT_SPAN: f64 = 2.0;
const FIT_POINTS: usize = 2001;

/// Worst-case gap to tanh over `[0, 2]` for the normalized block `m s / (s^2 + c)`.
/// Both functions are odd, so the negative half adds nothing.
pub fn normalized_fit_error(m: f64, c: f64) -> f64 {
    (0..FIT_POINTS)
        .map(|k| {
            let s = FIT_SPAN * k as f64 / (FIT_POINTS - 1) as f64;
            (m * s / (s * s + c) - s.tanh()).abs()
        })
        .fold(0.0, f64::max)
}

/// Fits `(m, c)` for a block whose unit input current is `unit_current`.
///
/// Minimizes the worst-case error against `tanh(x/u)` over `|x| <= 2u` by a
/// coarse grid around the seed followed by a shrinking pattern search. The
/// fit runs in normalized units and is scaled back with `m ~ u`, `c ~ u^2`.
pub fn calibrate_tanh(unit_current: f64) -> Result<TanhCalibration> {
    if !(unit_current > 0.0) || !unit_current.is_finite() {
        return Err(Error::argument(format!("unit current must be positive, got {unit_current}")));
    }
    let mut best = (3.0, 3.0);
    let mut best_err = normalized_fit_error(3.0, 3.0);
    for i in 0..=40 {
        for j in 0..=40 {
            let cand = (1.0 + 0.075 * i as f64, 1.0 + 0.075 * j as f64);
            let e = normalized_fit_error(cand.0, cand.1);
            if e < best_err {
                best = cand;
                best_err = e;
            }
        }
    }
    let mut step = 0.075;
    while step > 1e-9 {
        let mut moved = false;
        for (dm, dc) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let cand = (best.0 + dm * step, best.1 + dc * step);
            if cand.1 <= 0.0 {
                continue;
            }
            let e = normalized_fit_error(cand.0, cand.1);
            if e < best_err {
                best = cand;
                best_err = e;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(TanhCalibration {
        m: best.0 * unit_current,
        c: best.1 * unit_current * unit_current,
        max_error: best_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::current::DEFAULT_I_REF;

    #[test]
    fn pade_reference_points() {
        assert_eq!(pade_tanh(0.0), 0.0);
        assert_eq!(pade_tanh(1.0), 0.75);
        assert!(((1.0f64).tanh() - pade_tanh(1.0) - 0.0116).abs() < 1e-4);
    }

    #[test]
    fn closed_form_is_odd() {
        for x in [0.1, 0.7, 1.3, 2.0, 5.0] {
            assert_eq!(tanh_block(-x, 3.0, 3.0).unwrap(), -tanh_block(x, 3.0, 3.0).unwrap());
        }
        assert!(tanh_block(1.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn structural_matches_closed_form() {
        let u = 0.1e-3;
        let (m, c) = tanh_seed(u);
        let ideal = BlockNonideality::ideal();
        for k in -100..=100 {
            let x = 2.0 * u * k as f64 / 100.0;
            let a = tanh_block(x, m, c).unwrap();
            let b = tanh_block_structural(x, m, c, DEFAULT_I_REF, &ideal).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs(), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn structural_reports_divider_overload() {
        // Large inputs push the divider past its ceiling in nonideal mode.
        let real = BlockNonideality::nonideal();
        let r = tanh_block_structural(0.1, 3.0, 3.0, DEFAULT_I_REF, &real);
        assert!(matches!(r, Err(Error::OperatingRange(_))), "{r:?}");
    }

    #[test]
    fn seeds() {
        assert_eq!(tanh_seed(1.0), (3.0, 3.0));
        let (m, c) = tanh_seed(0.1e-3);
        assert!((m - 300e-6).abs() < 1e-18);
        assert!((c - 3e-8).abs() < 1e-22);
    }

    #[test]
    fn calibration_beats_the_seed_and_scales() {
        let unit = calibrate_tanh(1.0).unwrap();
        let seed_err = normalized_fit_error(3.0, 3.0);
        assert!(unit.max_error < seed_err);
        let u = 0.1e-3;
        let scaled = calibrate_tanh(u).unwrap();
        assert!((scaled.m / u - unit.m).abs() < 1e-12);
        assert!((scaled.c / (u * u) - unit.c).abs() < 1e-12);
        // Check the bound directly in physical units.
        for k in 0..=400 {
            let x = 2.0 * u * k as f64 / 400.0;
            let err = (tanh_block(x, scaled.m, scaled.c).unwrap() * 1.0 - (x / u).tanh()).abs();
            assert!(err <= seed_err + 1e-12, "{x}: {err}");
        }
    }
}
