use crate::device::Window;
use crate::error::{Error, Result};
use crate::formats::profile::{ParameterProfile, ProfileValue};

/// Constants of the linear ion drift model (HP TiO2 device).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearDrift {
    /// Film thickness in meters.
    pub d: f64,
    /// Dopant mobility in m^2 / (V s).
    pub mu_v: f64,
}

/// Constants of the nonlinear ion drift model.
///
/// The state moves as `dx/dt = a * v^m * f(x)` (voltage controlled). The
/// current-voltage fit constants are kept for [`NonlinearDrift::fit_current`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearDrift {
    /// Rate constant of the state equation, 1 / (s V^m).
    pub a: f64,
    /// Odd integer exponent applied to the drive voltage.
    pub m: i32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub chi: f64,
    pub n: f64,
}

impl NonlinearDrift {
    /// Fitted current-voltage relation `x^n beta sinh(alpha v) + chi (exp(gamma v) - 1)`.
    pub fn fit_current(&self, x: f64, v: f64) -> f64 {
        x.powf(self.n) * self.beta * (self.alpha * v).sinh() + self.chi * ((self.gamma * v).exp() - 1.0)
    }
}

/// How TEAM maps its state onto a resistance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeamVariant {
    LinearResistance,
    ExponentialResistance,
}

/// Constants of the threshold adaptive memristor model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Team {
    /// Rate when current is below `i_on` (negative, moves the state toward `x_on`).
    pub k_on: f64,
    /// Rate when current is above `i_off` (positive, moves the state toward `x_off`).
    pub k_off: f64,
    pub alpha_on: f64,
    pub alpha_off: f64,
    pub i_on: f64,
    pub i_off: f64,
    pub x_on: f64,
    pub x_off: f64,
    pub lambda: f64,
    pub variant: TeamVariant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    LinearIonDrift(LinearDrift),
    NonlinearIonDrift(NonlinearDrift),
    Team(Team),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::LinearIonDrift(_) => "linear",
            Model::NonlinearIonDrift(_) => "nonlinear",
            Model::Team(_) => "team",
        }
    }
}

/// Everything needed to evaluate one memristor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    pub r_on: f64,
    pub r_off: f64,
    pub model: Model,
    pub window: Window,
}

impl DeviceParams {
    /// Linear ion drift with HP-class constants: 1 kΩ / 81 kΩ, D = 10 nm,
    /// mu_v = 1e-14 m²/Vs and no window.
    pub fn hp_linear() -> Self {
        DeviceParams {
            r_on: 1e3,
            r_off: 81e3,
            model: Model::LinearIonDrift(LinearDrift { d: 10e-9, mu_v: 1e-14 }),
            window: Window::None,
        }
    }

    /// Sample nonlinear ion drift profile with the piecewise window.
    pub fn nonlinear_sample() -> Self {
        DeviceParams {
            r_on: 1e3,
            r_off: 81e3,
            model: Model::NonlinearIonDrift(NonlinearDrift {
                a: 1.0,
                m: 5,
                alpha: 2.0,
                beta: 9e-6,
                gamma: 4.0,
                chi: 1e-10,
                n: 4.0,
            }),
            window: Window::piecewise_default(),
        }
    }

    /// TEAM profile using the constants commonly quoted for the fit to the
    /// Pickett tunnel-barrier device, with the linear resistance variant.
    pub fn team_default() -> Self {
        let r_on = 50.0;
        let r_off = 1e3;
        DeviceParams {
            r_on,
            r_off,
            model: Model::Team(Team {
                k_on: -4.68e-13,
                k_off: 1.46e-9,
                alpha_on: 10.0,
                alpha_off: 10.0,
                i_on: -8.9e-6,
                i_off: 115e-6,
                x_on: 1.2e-9,
                x_off: 1.8e-9,
                lambda: (r_off / r_on).ln(),
                variant: TeamVariant::LinearResistance,
            }),
            window: Window::TeamExp { w_c: 0.1 },
        }
    }

    /// Looks up one of the shipped profiles by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "hp-linear" => Some(Self::hp_linear()),
            "nonlinear-sample" => Some(Self::nonlinear_sample()),
            "team-default" => Some(Self::team_default()),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 3] = ["hp-linear", "nonlinear-sample", "team-default"];

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::argument(format!("{name} must be finite, got {v}")))
            }
        };
        finite("r_on", self.r_on)?;
        finite("r_off", self.r_off)?;
        if self.r_on <= 0.0 || self.r_off <= self.r_on {
            return Err(Error::argument(format!(
                "need 0 < r_on < r_off, got r_on={} r_off={}",
                self.r_on, self.r_off
            )));
        }
        match &self.model {
            Model::LinearIonDrift(p) => {
                if !(p.d > 0.0 && p.mu_v > 0.0) {
                    return Err(Error::argument("linear model needs d > 0 and mu_v > 0"));
                }
            }
            Model::NonlinearIonDrift(p) => {
                for (name, v) in [("a", p.a), ("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma), ("chi", p.chi), ("n", p.n)] {
                    finite(name, v)?;
                }
                if p.m < 1 || p.m % 2 == 0 {
                    return Err(Error::argument(format!("nonlinear exponent m must be a positive odd integer, got {}", p.m)));
                }
            }
            Model::Team(p) => {
                if !(p.i_on < 0.0 && 0.0 < p.i_off) {
                    return Err(Error::argument("TEAM needs i_on < 0 < i_off"));
                }
                if !(p.x_on < p.x_off) {
                    return Err(Error::argument("TEAM needs x_on < x_off"));
                }
                if !(p.k_on <= 0.0 && p.k_off >= 0.0) {
                    return Err(Error::argument("TEAM needs k_on <= 0 <= k_off"));
                }
                if !(p.alpha_on > 0.0 && p.alpha_off > 0.0) {
                    return Err(Error::argument("TEAM exponents must be positive"));
                }
                if p.variant == TeamVariant::ExponentialResistance {
                    // M(x_off) = r_on * exp(lambda) must stay inside [r_on, r_off].
                    let top = (self.r_off / self.r_on).ln();
                    if !(p.lambda > 0.0 && p.lambda <= top * (1.0 + 1e-12)) {
                        return Err(Error::argument(format!(
                            "TEAM lambda must lie in (0, ln(r_off/r_on)] = (0, {top}], got {}",
                            p.lambda
                        )));
                    }
                }
            }
        }
        self.window.validate()
    }

    /// Legal interval of the state variable.
    pub fn state_range(&self) -> (f64, f64) {
        match &self.model {
            Model::Team(p) => (p.x_on, p.x_off),
            _ => (0.0, 1.0),
        }
    }

    /// Maps a state onto `[0, 1]` (identity for the ion drift models).
    pub fn normalized(&self, x: f64) -> f64 {
        match &self.model {
            Model::Team(p) => (x - p.x_on) / (p.x_off - p.x_on),
            _ => x,
        }
    }

    pub fn clamp_state(&self, x: f64) -> f64 {
        let (lo, hi) = self.state_range();
        x.clamp(lo, hi)
    }

    /// Reads a parameter profile. Unknown keys are rejected so typos surface.
    ///
    /// Keys: `model` (`linear` | `nonlinear` | `team`), `r_on`, `r_off`; linear
    /// `d`, `mu_v`; nonlinear `a`, `m`, `alpha`, `beta`, `gamma`, `chi`, `n`;
    /// TEAM `k_on`, `k_off`, `alpha_on`, `alpha_off`, `i_on`, `i_off`, `x_on`,
    /// `x_off`, `lambda`, `variant` (`linear` | `exponential`); window
    /// `window` (`none` | `joglekar` | `biolek` | `prodromakis` | `piecewise` |
    /// `team`), `p`, `j`, `window_a`, `window_b`, `window_k`, `x0`, `w_c`.
    /// Omitted numeric keys fall back to the matching built-in profile.
    pub fn from_profile(profile: &ParameterProfile) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "model", "r_on", "r_off", "d", "mu_v", "a", "m", "alpha", "beta", "gamma", "chi", "n", "k_on", "k_off",
            "alpha_on", "alpha_off", "i_on", "i_off", "x_on", "x_off", "lambda", "variant", "window", "p", "j",
            "window_a", "window_b", "window_k", "x0", "w_c",
        ];
        for (key, _) in profile.iter() {
            if !KNOWN.contains(&key) {
                return Err(Error::argument(format!("unknown profile key `{key}`")));
            }
        }

        let model_name = match profile.get("model") {
            Some(ProfileValue::Token(t)) => t.as_str(),
            Some(other) => return Err(Error::argument(format!("`model` must be a token, got {other}"))),
            None => "linear",
        };
        let mut params = match model_name {
            "linear" => Self::hp_linear(),
            "nonlinear" => Self::nonlinear_sample(),
            "team" => Self::team_default(),
            other => return Err(Error::argument(format!("unknown model `{other}`"))),
        };

        let num = |key: &str, default: f64| -> Result<f64> {
            match profile.get(key) {
                Some(ProfileValue::Number(v)) => Ok(*v),
                Some(other) => Err(Error::argument(format!("`{key}` must be numeric, got {other}"))),
                None => Ok(default),
            }
        };

        params.r_on = num("r_on", params.r_on)?;
        params.r_off = num("r_off", params.r_off)?;
        match &mut params.model {
            Model::LinearIonDrift(p) => {
                p.d = num("d", p.d)?;
                p.mu_v = num("mu_v", p.mu_v)?;
            }
            Model::NonlinearIonDrift(p) => {
                p.a = num("a", p.a)?;
                let m = num("m", p.m as f64)?;
                if m.fract() != 0.0 {
                    return Err(Error::argument(format!("`m` must be an integer, got {m}")));
                }
                p.m = m as i32;
                p.alpha = num("alpha", p.alpha)?;
                p.beta = num("beta", p.beta)?;
                p.gamma = num("gamma", p.gamma)?;
                p.chi = num("chi", p.chi)?;
                p.n = num("n", p.n)?;
            }
            Model::Team(p) => {
                p.k_on = num("k_on", p.k_on)?;
                p.k_off = num("k_off", p.k_off)?;
                p.alpha_on = num("alpha_on", p.alpha_on)?;
                p.alpha_off = num("alpha_off", p.alpha_off)?;
                p.i_on = num("i_on", p.i_on)?;
                p.i_off = num("i_off", p.i_off)?;
                p.x_on = num("x_on", p.x_on)?;
                p.x_off = num("x_off", p.x_off)?;
                p.variant = match profile.get("variant") {
                    None => p.variant,
                    Some(ProfileValue::Token(t)) if t == "linear" => TeamVariant::LinearResistance,
                    Some(ProfileValue::Token(t)) if t == "exponential" => TeamVariant::ExponentialResistance,
                    Some(other) => return Err(Error::argument(format!("unknown TEAM variant {other}"))),
                };
                let lambda_default = (params.r_off / params.r_on).ln();
                p.lambda = num("lambda", lambda_default)?;
            }
        }

        if let Some(value) = profile.get("window") {
            let ProfileValue::Token(kind) = value else {
                return Err(Error::argument(format!("`window` must be a token, got {value}")));
            };
            let p_exp = || -> Result<u32> {
                let p = num("p", 1.0)?;
                if p < 1.0 || p.fract() != 0.0 {
                    return Err(Error::argument(format!("window exponent p must be a positive integer, got {p}")));
                }
                Ok(p as u32)
            };
            params.window = match kind.as_str() {
                "none" => Window::None,
                "joglekar" => Window::Joglekar { p: p_exp()? },
                "biolek" => Window::Biolek { p: p_exp()? },
                "prodromakis" => Window::Prodromakis { p: p_exp()?, j: num("j", 1.0)? },
                "piecewise" => {
                    let Window::Piecewise { a, b, k, x0 } = Window::piecewise_default() else {
                        unreachable!()
                    };
                    Window::Piecewise {
                        a: num("window_a", a)?,
                        b: num("window_b", b)?,
                        k: num("window_k", k)?,
                        x0: num("x0", x0)?,
                    }
                }
                "team" => Window::TeamExp { w_c: num("w_c", 0.1)? },
                other => return Err(Error::argument(format!("unknown window `{other}`"))),
            };
        }

        params.validate()?;
        Ok(params)
    }

    /// Inverse of [`DeviceParams::from_profile`].
    pub fn to_profile(&self) -> ParameterProfile {
        let mut out = ParameterProfile::new();
        let tok = |s: &str| ProfileValue::Token(s.to_string());
        let num = ProfileValue::Number;
        out.insert("model", tok(self.model.name()));
        out.insert("r_on", num(self.r_on));
        out.insert("r_off", num(self.r_off));
        match &self.model {
            Model::LinearIonDrift(p) => {
                out.insert("d", num(p.d));
                out.insert("mu_v", num(p.mu_v));
            }
            Model::NonlinearIonDrift(p) => {
                out.insert("a", num(p.a));
                out.insert("m", num(p.m as f64));
                out.insert("alpha", num(p.alpha));
                out.insert("beta", num(p.beta));
                out.insert("gamma", num(p.gamma));
                out.insert("chi", num(p.chi));
                out.insert("n", num(p.n));
            }
            Model::Team(p) => {
                out.insert("k_on", num(p.k_on));
                out.insert("k_off", num(p.k_off));
                out.insert("alpha_on", num(p.alpha_on));
                out.insert("alpha_off", num(p.alpha_off));
                out.insert("i_on", num(p.i_on));
                out.insert("i_off", num(p.i_off));
                out.insert("x_on", num(p.x_on));
                out.insert("x_off", num(p.x_off));
                out.insert("lambda", num(p.lambda));
                let variant = match p.variant {
                    TeamVariant::LinearResistance => "linear",
                    TeamVariant::ExponentialResistance => "exponential",
                };
                out.insert("variant", tok(variant));
            }
        }
        match self.window {
            Window::None => out.insert("window", tok("none")),
            Window::Joglekar { p } => {
                out.insert("window", tok("joglekar"));
                out.insert("p", num(p as f64));
            }
            Window::Biolek { p } => {
                out.insert("window", tok("biolek"));
                out.insert("p", num(p as f64));
            }
            Window::Prodromakis { p, j } => {
                out.insert("window", tok("prodromakis"));
                out.insert("p", num(p as f64));
                out.insert("j", num(j));
            }
            Window::Piecewise { a, b, k, x0 } => {
                out.insert("window", tok("piecewise"));
                out.insert("window_a", num(a));
                out.insert("window_b", num(b));
                out.insert("window_k", num(k));
                out.insert("x0", num(x0));
            }
            Window::TeamExp { w_c } => {
                out.insert("window", tok("team"));
                out.insert("w_c", num(w_c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in DeviceParams::BUILTIN_NAMES {
            DeviceParams::builtin(name).unwrap().validate().unwrap();
        }
        assert!(DeviceParams::builtin("simmons").is_none());
    }

    #[test]
    fn rejects_inverted_resistances() {
        let mut p = DeviceParams::hp_linear();
        p.r_off = 500.0;
        assert!(matches!(p.validate(), Err(Error::Argument(_))));
    }

    #[test]
    fn rejects_bad_team_thresholds() {
        let mut p = DeviceParams::team_default();
        if let Model::Team(t) = &mut p.model {
            t.i_on = 1e-6;
        }
        assert!(p.validate().is_err());
        let mut p = DeviceParams::team_default();
        if let Model::Team(t) = &mut p.model {
            t.x_off = t.x_on;
        }
        assert!(p.validate().is_err());
    }

    #[test]
    fn profile_round_trip_for_builtins() {
        for name in DeviceParams::BUILTIN_NAMES {
            let p = DeviceParams::builtin(name).unwrap();
            let back = DeviceParams::from_profile(&p.to_profile()).unwrap();
            assert_eq!(p, back, "{name}");
        }
    }

    #[test]
    fn profile_rejects_unknown_key() {
        let profile = ParameterProfile::parse("model = linear\nr_onn = 5\n").unwrap();
        assert!(DeviceParams::from_profile(&profile).is_err());
    }

    #[test]
    fn profile_overrides_defaults() {
        let profile = ParameterProfile::parse("model = linear\nr_off = 100e3\nwindow = joglekar\np = 2\n").unwrap();
        let p = DeviceParams::from_profile(&profile).unwrap();
        assert_eq!(p.r_off, 100e3);
        assert_eq!(p.window, Window::Joglekar { p: 2 });
    }
}
