//! Closed forms for `‖Γ⁴_τ(ρ_A - λ ρ_B)‖₁` and its `τ`-derivative, `λ ≥ 0`.
//!
//! With `S(α) = √(1 + λ² + 2λ cos 2α)`:
//!
//! ```text
//! N(τ)  = ½ [(1 - τ²)|λ - 1| + (1 + τ²) S(θτ)]
//! N'(τ) = τ [S - |λ - 1|] - λθ(1 + τ²) sin(2θτ) / S
//! ```
//!
//! `S` vanishes only at `λ = 1, 2θτ = π`, where `N` has a kink.

use crate::counterexample::Smoothing;
use crate::error::{out_of_range, Error, Result};

/// Below this `S` the derivative is reported as singular.
pub const SINGULAR_CUTOFF: f64 = 1e-12;

fn check(lambda: f64, tau: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(out_of_range("lambda", lambda, "[0, inf)"));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(out_of_range("tau", tau, "[0, 1]"));
    }
    Ok(())
}

/// `S = √((1-λ)² + 4λ cos²α)`, the same quantity written without cancellation near `S = 0`.
fn s_of(lambda: f64, alpha: f64) -> f64 {
    let c = alpha.cos();
    ((1.0 - lambda) * (1.0 - lambda) + 4.0 * lambda * c * c).sqrt()
}

pub fn gamma4_norm_closed_form(lambda: f64, tau: f64, theta: f64) -> Result<f64> {
    check(lambda, tau)?;
    let t2 = tau * tau;
    Ok(0.5 * ((1.0 - t2) * (lambda - 1.0).abs() + (1.0 + t2) * s_of(lambda, theta * tau)))
}

pub fn gamma4_derivative_closed_form(lambda: f64, tau: f64, theta: f64) -> Result<f64> {
    gamma4_derivative_smoothed(lambda, tau, theta, 1.0, Smoothing::Rotation)
}

/// The norm with `Γ⁴` smoothed by `δ` (see [`Smoothing`]).
pub fn gamma4_norm_smoothed(
    lambda: f64,
    tau: f64,
    theta: f64,
    delta: f64,
    smoothing: Smoothing,
) -> Result<f64> {
    check(lambda, tau)?;
    let u = tau.powf(delta);
    let w = match smoothing {
        Smoothing::Rotation => tau * tau,
        Smoothing::Full => u * u,
    };
    Ok(0.5 * ((1.0 - w) * (lambda - 1.0).abs() + (1.0 + w) * s_of(lambda, theta * u)))
}

/// `d/dτ` of [`gamma4_norm_smoothed`].
///
/// Rotation smoothing: `τ(S - |λ-1|) - λ(1+τ²) sin(2α) θδτ^{δ-1} / S` with
/// `α = θτ^δ`. Full smoothing: `δτ^{δ-1} N'(τ^δ)`.
pub fn gamma4_derivative_smoothed(
    lambda: f64,
    tau: f64,
    theta: f64,
    delta: f64,
    smoothing: Smoothing,
) -> Result<f64> {
    check(lambda, tau)?;
    let u = tau.powf(delta);
    let du = if delta == 1.0 { 1.0 } else { delta * tau.powf(delta - 1.0) };
    let alpha = theta * u;
    let s = s_of(lambda, alpha);
    if s < SINGULAR_CUTOFF {
        return Err(Error::SingularPoint { lambda, tau, theta });
    }
    let rot = lambda * (2.0 * alpha).sin() * theta / s;
    Ok(match smoothing {
        Smoothing::Rotation => {
            tau * (s - (lambda - 1.0).abs()) - (1.0 + tau * tau) * rot * du
        }
        Smoothing::Full => du * (u * (s - (lambda - 1.0).abs()) - (1.0 + u * u) * rot),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        for th in [0.3, 1.5, 2.9] {
            assert!((gamma4_norm_closed_form(1.0, 0.0, th).unwrap() - 1.0).abs() < 1e-15);
            for tau in [0.0, 0.4, 1.0] {
                assert!((gamma4_norm_closed_form(0.0, tau, th).unwrap() - 1.0).abs() < 1e-15);
            }
            assert_eq!(gamma4_derivative_closed_form(0.7, 0.0, th).unwrap(), 0.0);
        }
    }

    #[test]
    fn singular_point_is_reported() {
        let theta = 1.6;
        let tau = std::f64::consts::FRAC_PI_2 / theta;
        assert!(matches!(
            gamma4_derivative_closed_form(1.0, tau, theta),
            Err(Error::SingularPoint { .. })
        ));
        assert!(gamma4_norm_closed_form(-0.1, 0.5, 1.5).is_err());
        assert!(gamma4_norm_closed_form(0.1, 1.5, 1.5).is_err());
    }

    #[test]
    fn smoothed_reduces_to_plain_at_delta_one() {
        for (l, t, th) in [(0.3, 0.2, 1.5), (2.0, 0.9, 1.2), (1.0, 0.5, 1.6)] {
            let a = gamma4_derivative_closed_form(l, t, th).unwrap();
            for sm in [Smoothing::Rotation, Smoothing::Full] {
                let b = gamma4_derivative_smoothed(l, t, th, 1.0, sm).unwrap();
                assert!((a - b).abs() < 1e-15);
                let n = gamma4_norm_smoothed(l, t, th, 1.0, sm).unwrap();
                assert!((n - gamma4_norm_closed_form(l, t, th).unwrap()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn smoothed_derivative_matches_central_difference() {
        let h = 1e-6;
        for sm in [Smoothing::Rotation, Smoothing::Full] {
            for (l, t) in [(0.5, 0.3), (1.0, 0.05), (3.0, 0.8)] {
                let f = |x| gamma4_norm_smoothed(l, x, 1.55, 1.05, sm).unwrap();
                let fd = (f(t + h) - f(t - h)) / (2.0 * h);
                let d = gamma4_derivative_smoothed(l, t, 1.55, 1.05, sm).unwrap();
                assert!((fd - d).abs() < 1e-7, "{sm:?} {l} {t}: {fd} vs {d}");
            }
        }
    }
}
