//! Parameters of the qutrit counterexample and their plain-text config format.
//!
//! Config files hold one `key = value` pair per line; blank lines and text
//! after `#` are ignored. Recognised keys:
//!
//! ```text
//! theta = 1.5          # rotation angle, radians, in (0, pi)
//! t1 = 1               # segment boundaries, 0 < t1 < t2 < t3 < t4
//! t2 = 2
//! t3 = 3
//! t4 = 4
//! delta = 1            # smoothing exponent, >= 1
//! smoothing = rotation # rotation | full
//! rate = default-pole  # rate functions for gamma, f1 and f2
//! ```

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-linear table `(x_i, y_i)` on `[0, x_last]`, `x_last < 1`, with a
/// pole continuation on `(x_last, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    knots: Vec<(f64, f64)>,
}

impl RateTable {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidParams("rate table needs at least two knots".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::InvalidParams("rate table must start at 0".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParams("rate table abscissae must ascend".into()));
        }
        let last = knots[knots.len() - 1].0;
        if last >= 1.0 {
            return Err(Error::InvalidParams("rate table must end before 1".into()));
        }
        Ok(Self { knots })
    }

    fn interpolate(&self, x: f64) -> f64 {
        let k = &self.knots;
        let i = k.partition_point(|p| p.0 <= x).clamp(1, k.len() - 1);
        let (x0, y0) = k[i - 1];
        let (x1, y1) = k[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn last(&self) -> (f64, f64) {
        self.knots[self.knots.len() - 1]
    }

    fn last_slope(&self) -> f64 {
        let n = self.knots.len();
        let (x0, y0) = self.knots[n - 2];
        let (x1, y1) = self.knots[n - 1];
        (y1 - y0) / (x1 - x0)
    }

    /// Trapezoidal integral of the interpolant over `[0, x]`, `x <= x_last`.
    fn integral(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for w in self.knots.windows(2) {
            let (a, fa) = w[0];
            let (b, fb) = w[1];
            if x <= a {
                break;
            }
            let hi = x.min(b);
            let fhi = fa + (fb - fa) * (hi - a) / (b - a);
            acc += 0.5 * (fa + fhi) * (hi - a);
        }
        acc
    }
}

/// Rate functions of the construction.
///
/// In the decay-rate role (`γ`), the default pole is `γ(s) = 1/(1-s)` with
/// integral `g(τ) = -ln(1-τ)`. In the exponent role (`f1`, `f2`), it is
/// `f(τ) = τ²/(1-τ)`. Tabulated functions interpolate linearly, then continue
/// with a matching pole, so they still diverge at `τ = 1`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateFunction {
    #[default]
    DefaultPole,
    CustomTabulated(RateTable),
}

impl RateFunction {
    /// `γ(s)` in the decay-rate role.
    pub fn gamma(&self, s: f64) -> f64 {
        match self {
            Self::DefaultPole => 1.0 / (1.0 - s),
            Self::CustomTabulated(t) => {
                let (xl, yl) = t.last();
                if s <= xl {
                    t.interpolate(s)
                } else {
                    yl * (1.0 - xl) / (1.0 - s)
                }
            }
        }
    }

    /// `g(τ) = ∫₀^τ γ(s) ds`; infinite at `τ = 1`.
    pub fn gamma_integral(&self, tau: f64) -> f64 {
        if tau >= 1.0 {
            return f64::INFINITY;
        }
        match self {
            Self::DefaultPole => -(-tau).ln_1p(),
            Self::CustomTabulated(t) => {
                let (xl, yl) = t.last();
                if tau <= xl {
                    t.integral(tau)
                } else {
                    t.integral(xl) - yl * (1.0 - xl) * ((1.0 - tau) / (1.0 - xl)).ln()
                }
            }
        }
    }

    /// `f(τ)` in the exponent role; infinite at `τ = 1`.
    pub fn exponent(&self, tau: f64) -> f64 {
        if tau >= 1.0 {
            return f64::INFINITY;
        }
        match self {
            Self::DefaultPole => tau * tau / (1.0 - tau),
            Self::CustomTabulated(t) => {
                let (xl, yl) = t.last();
                if tau <= xl {
                    t.interpolate(tau)
                } else {
                    yl + t.last_slope() * (1.0 - xl) * (tau - xl) / (1.0 - tau)
                }
            }
        }
    }

    fn validate_exponent(&self, name: &str) -> Result<()> {
        if let Self::CustomTabulated(t) = self {
            if t.knots[0].1 != 0.0 {
                return Err(Error::InvalidParams(format!("{name}(0) must be 0")));
            }
            if t.knots.windows(2).any(|w| w[1].1 <= w[0].1) {
                return Err(Error::InvalidParams(format!("{name} must be strictly increasing")));
            }
        }
        Ok(())
    }

    fn validate_rate(&self) -> Result<()> {
        if let Self::CustomTabulated(t) = self {
            if t.knots.iter().any(|k| !(k.1 > 0.0)) {
                return Err(Error::InvalidParams("gamma must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Where the smoothing exponent `δ` enters `Γ⁽⁴⁾`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    /// `τ → τ^δ` in the rotation argument only; weights `1 ± τ²` unchanged.
    #[default]
    Rotation,
    /// `τ → τ^δ` everywhere in `Γ⁽⁴⁾` (a monotone reparametrisation).
    Full,
}

impl std::str::FromStr for Smoothing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(Self::Rotation),
            "full" => Ok(Self::Full),
            other => Err(Error::InvalidParams(format!("unknown smoothing {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub theta: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub gamma_rate: RateFunction,
    pub f1: RateFunction,
    pub f2: RateFunction,
    pub delta: f64,
    pub smoothing: Smoothing,
}

impl Default for MapParams {
    fn default() -> Self {
        Self {
            theta: 1.5,
            t1: 1.0,
            t2: 2.0,
            t3: 3.0,
            t4: 4.0,
            gamma_rate: RateFunction::DefaultPole,
            f1: RateFunction::DefaultPole,
            f2: RateFunction::DefaultPole,
            delta: 1.0,
            smoothing: Smoothing::Rotation,
        }
    }
}

impl MapParams {
    pub fn with_theta(theta: f64) -> Self {
        Self {
            theta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ts = [self.t1, self.t2, self.t3, self.t4];
        if !(ts[0] > 0.0) || ts.windows(2).any(|w| !(w[1] > w[0])) || !ts[3].is_finite() {
            return Err(Error::InvalidParams(format!(
                "segment boundaries must satisfy 0 < t1 < t2 < t3 < t4, got {ts:?}"
            )));
        }
        if !(self.theta > 0.0 && self.theta < PI) {
            return Err(Error::InvalidParams(format!("theta = {} not in (0, pi)", self.theta)));
        }
        if !(self.delta >= 1.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta = {} must be >= 1", self.delta)));
        }
        self.gamma_rate.validate_rate()?;
        self.f1.validate_exponent("f1")?;
        self.f2.validate_exponent("f2")?;
        Ok(())
    }

    /// Whether `θ ∈ [√2, π/2]`, the window with guaranteed monotone contractivity.
    pub fn in_contractive_window(&self) -> bool {
        (SQRT_2..=FRAC_PI_2).contains(&self.theta)
    }

    pub fn boundaries(&self) -> [f64; 4] {
        [self.t1, self.t2, self.t3, self.t4]
    }

    pub fn min_segment(&self) -> f64 {
        [self.t1, self.t2 - self.t1, self.t3 - self.t2, self.t4 - self.t3]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Parses the `key = value` config format described in the module docs.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut p = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `key = value`, got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value.parse::<f64>().map_err(|e| Error::Config {
                    line,
                    msg: format!("{key}: {e}"),
                })
            };
            match key {
                "theta" => p.theta = num()?,
                "t1" => p.t1 = num()?,
                "t2" => p.t2 = num()?,
                "t3" => p.t3 = num()?,
                "t4" => p.t4 = num()?,
                "delta" => p.delta = num()?,
                "smoothing" => {
                    p.smoothing = value.parse().map_err(|e: Error| Error::Config {
                        line,
                        msg: e.to_string(),
                    })?
                }
                "rate" => {
                    if value != "default-pole" {
                        return Err(Error::Config {
                            line,
                            msg: format!("unsupported rate {value:?} (only default-pole)"),
                        });
                    }
                    p.gamma_rate = RateFunction::DefaultPole;
                    p.f1 = RateFunction::DefaultPole;
                    p.f2 = RateFunction::DefaultPole;
                }
                other => {
                    return Err(Error::Config {
                        line,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_config_str(&std::fs::read_to_string(path)?)
    }
}
