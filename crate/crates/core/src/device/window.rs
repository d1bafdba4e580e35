//! Window functions that suppress state drift near the ends of the state range.
//!
//! Every window is evaluated on the normalized state `u` in `[0, 1]`. A
//! positive drive moves `u` toward 1.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    None,
    /// `1 - (2u - 1)^(2p)`
    Joglekar { p: u32 },
    /// `1 - (u - step(-drive))^(2p)` where `step(s) = 1` for `s >= 0`.
    Biolek { p: u32 },
    /// `j (1 - ((u - 0.5)^2 + 0.75)^p)`
    Prodromakis { p: u32, j: f64 },
    /// `(1 + ((u - 0.5)/a)^(2b))^-1` on `[x0, 1 - x0]`, `k u (1 - u)` outside.
    Piecewise { a: f64, b: f64, k: f64, x0: f64 },
    /// TEAM's double exponential, `exp(-exp((u - 1)/w_c))` for positive drive
    /// and `exp(-exp(-u/w_c))` otherwise. `w_c` is in normalized state units.
    TeamExp { w_c: f64 },
}

impl Window {
    /// Piecewise window with `a = 0.4`, `b = 4`, `x0 = 0.1` and `k` chosen so
    /// both branches meet at `x0`.
    pub fn piecewise_default() -> Self {
        let (a, b, x0) = (0.4, 4.0, 0.1);
        let inner = 1.0 / (1.0 + ((x0 - 0.5f64) / a).powi(2).powf(b));
        Window::Piecewise {
            a,
            b,
            k: inner / (x0 * (1.0 - x0)),
            x0,
        }
    }

    /// Largest value the window may take; only Prodromakis scales past 1.
    pub fn ceiling(&self) -> f64 {
        match self {
            Window::Prodromakis { j, .. } => *j,
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Window::None => Ok(()),
            Window::Joglekar { p } | Window::Biolek { p } if p == 0 => Err(Error::argument("window exponent p must be >= 1")),
            Window::Joglekar { .. } | Window::Biolek { .. } => Ok(()),
            Window::Prodromakis { p, j } => {
                if p == 0 || !(j > 0.0 && j.is_finite()) {
                    Err(Error::argument("Prodromakis window needs p >= 1 and j > 0"))
                } else {
                    Ok(())
                }
            }
            Window::Piecewise { a, b, k, x0 } => {
                if !(a > 0.0 && b > 0.0 && k >= 0.0 && (0.0..0.5).contains(&x0)) {
                    return Err(Error::argument("piecewise window needs a > 0, b > 0, k >= 0, 0 <= x0 < 0.5"));
                }
                // The outer parabola peaks at x0 inside its own branch.
                if k * x0 * (1.0 - x0) > 1.0 {
                    return Err(Error::argument("piecewise window exceeds 1 on its outer branch; lower k"));
                }
                Ok(())
            }
            Window::TeamExp { w_c } => {
                if w_c > 0.0 && w_c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::argument("TEAM window needs w_c > 0"))
                }
            }
        }
    }

    /// Window value at normalized state `u` under a drive with the given sign.
    pub fn value(&self, u: f64, drive: f64) -> f64 {
        match *self {
            Window::None => 1.0,
            Window::Joglekar { p } => 1.0 - (2.0 * u - 1.0).powi(2 * p as i32),
            Window::Biolek { p } => {
                let step = if -drive >= 0.0 { 1.0 } else { 0.0 };
                1.0 - (u - step).powi(2 * p as i32)
            }
            Window::Prodromakis { p, j } => j * (1.0 - ((u - 0.5).powi(2) + 0.75).powi(p as i32)),
            Window::Piecewise { a, b, k, x0 } => {
                if (x0..=1.0 - x0).contains(&u) {
                    1.0 / (1.0 + ((u - 0.5) / a).powi(2).powf(b))
                } else {
                    k * u * (1.0 - u)
                }
            }
            Window::TeamExp { w_c } => {
                if drive > 0.0 {
                    (-((u - 1.0) / w_c).exp()).exp()
                } else {
                    (-(-u / w_c).exp()).exp()
                }
            }
        }
    }
}

/// Free-function form of [`Window::value`].
pub fn window_value(u: f64, drive: f64, window: &Window) -> f64 {
    window.value(u, drive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn joglekar_reference_points() {
        let w = Window::Joglekar { p: 1 };
        assert_eq!(w.value(0.5, 1.0), 1.0);
        assert_eq!(w.value(0.0, 1.0), 0.0);
        assert_eq!(w.value(1.0, -1.0), 0.0);
        assert!((w.value(0.25, 1.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn biolek_depends_on_drive_direction() {
        let w = Window::Biolek { p: 1 };
        assert_eq!(w.value(1.0, 1e-3), 0.0);
        assert_eq!(w.value(1.0, -1e-3), 1.0);
        assert_eq!(w.value(0.0, -1e-3), 0.0);
        // Asymmetric, unlike Joglekar.
        assert_ne!(w.value(0.2, 1.0), w.value(0.8, 1.0));
    }

    #[test]
    fn piecewise_default_is_continuous_at_x0() {
        let w = Window::piecewise_default();
        let Window::Piecewise { x0, .. } = w else { unreachable!() };
        let left = w.value(x0 - 1e-12, 1.0);
        let right = w.value(x0, 1.0);
        assert!((left - right).abs() < 1e-9);
        w.validate().unwrap();
    }

    #[test]
    fn team_window_tends_to_one_away_from_the_bound_it_guards() {
        let w = Window::TeamExp { w_c: 0.05 };
        assert!(w.value(0.0, 1.0) > 0.999);
        assert!((w.value(1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(w.value(1.0, -1.0) > 0.999);
    }

    fn windows() -> Vec<Window> {
        vec![
            Window::None,
            Window::Joglekar { p: 1 },
            Window::Joglekar { p: 3 },
            Window::Biolek { p: 2 },
            Window::Prodromakis { p: 2, j: 1.0 },
            Window::Prodromakis { p: 1, j: 4.0 },
            Window::piecewise_default(),
            Window::TeamExp { w_c: 0.1 },
        ]
    }

    proptest! {
        #[test]
        fn values_stay_within_ceiling(u in 0.0f64..=1.0, drive in -1.0f64..1.0) {
            for w in windows() {
                let f = w.value(u, drive);
                prop_assert!(f >= 0.0 && f <= w.ceiling() + 1e-15, "{w:?} at {u}: {f}");
            }
        }

        #[test]
        fn symmetric_windows(u in 0.0f64..=1.0) {
            for w in [Window::Joglekar { p: 2 }, Window::Prodromakis { p: 3, j: 1.0 }] {
                prop_assert!((w.value(u, 1.0) - w.value(1.0 - u, 1.0)).abs() < 1e-12);
            }
        }
    }
}
