//! Sign structure of the closed-form derivative over `θ`, the chain of upper
//! bounds that makes it nonpositive, and the `λ ↔ 1/λ` reflection.

use rayon::prelude::*;
use serde::Serialize;

use crate::counterexample::Smoothing;
use crate::error::{out_of_range, Error, Result};
use crate::tol::TOL_CLOSED_FORM;

use super::closed_form::{gamma4_derivative_closed_form, gamma4_derivative_smoothed};

/// `{start, start + step, ...}` up to and including `end` (within rounding).
pub fn stepped_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub max_derivative: f64,
    pub argmax_lambda: f64,
    pub argmax_tau: f64,
    /// Smallest `τ` at which some `λ` gives a derivative above the slack.
    pub first_positive_tau: Option<f64>,
    pub positive: bool,
    pub in_window: bool,
    /// Grid points landing on the singular point `λ = 1, 2θτ = π`.
    pub singular_skipped: usize,
}

pub fn theta_window_sweep(thetas: &[f64], taus: &[f64], lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    theta_window_sweep_smoothed(thetas, taus, lambdas, 1.0, Smoothing::Rotation)
}

pub fn theta_window_sweep_smoothed(
    thetas: &[f64],
    taus: &[f64],
    lambdas: &[f64],
    delta: f64,
    smoothing: Smoothing,
) -> Result<Vec<SweepRow>> {
    if taus.is_empty() || lambdas.is_empty() {
        return Err(Error::InvalidParams("sweep needs tau and lambda grids".into()));
    }
    thetas
        .par_iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta < std::f64::consts::PI) {
                return Err(out_of_range("theta", theta, "(0, pi)"));
            }
            let mut best = (f64::NEG_INFINITY, f64::NAN, f64::NAN);
            let mut first_positive_tau = None;
            let mut singular_skipped = 0;
            for &tau in taus {
                for &lambda in lambdas {
                    let v = match gamma4_derivative_smoothed(lambda, tau, theta, delta, smoothing) {
                        Ok(v) => v,
                        Err(Error::SingularPoint { .. }) => {
                            singular_skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    if v > best.0 {
                        best = (v, lambda, tau);
                    }
                    if v > TOL_CLOSED_FORM && first_positive_tau.is_none() {
                        first_positive_tau = Some(tau);
                    }
                }
            }
            Ok(SweepRow {
                theta,
                max_derivative: best.0,
                argmax_lambda: best.1,
                argmax_tau: best.2,
                first_positive_tau,
                positive: best.0 > TOL_CLOSED_FORM,
                in_window: (std::f64::consts::SQRT_2..=std::f64::consts::FRAC_PI_2).contains(&theta),
                singular_skipped,
            })
        })
        .collect()
}

/// Bound expressions at one `τ` (all for `λ ≥ 1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundPoint {
    pub tau: f64,
    /// Largest sampled closed-form derivative over `λ ∈ [1, 10]`.
    pub sup_derivative: f64,
    /// `τ√(2 + 2cos 2θτ) - (1+τ²)(θ/2) sin 2θτ`.
    pub half_angle_bound: f64,
    /// `cos θτ [2τ - (1+τ²)θ sin θτ]`.
    pub factored_bound: f64,
    /// `2τ - (1+τ²)θ sin θτ`.
    pub bracket: f64,
    /// Bracket with `sin x ≥ x - x³/6`: `(2-θ²)τ - (θ² - θ⁴/6)τ³ + θ⁴τ⁵/6`.
    pub quintic: f64,
    /// `(2-θ²)τ - (θ² - θ⁴/3)τ³`.
    pub polynomial: f64,
    /// Every link, including `polynomial ≤ 0`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundChainReport {
    pub theta: f64,
    pub points: Vec<BoundPoint>,
    /// Largest value of `-1 + (λ + c)/√(1 + λ² + 2λc)`, `c = cos 2θτ`.
    pub monotonicity_max: f64,
    /// Whether the term `τ[1 - λ + S]` of the derivative, sampled over `λ ≥ 1`,
    /// peaks at `λ = 1` for every `τ`.
    pub max_at_lambda_one: bool,
    pub all_hold: bool,
}

/// Grid of `λ ≥ 1` used by [`bound_chain_check`].
pub fn bound_lambda_grid() -> Vec<f64> {
    stepped_grid(1.0, 10.0, 0.25)
}

/// Evaluates each link of the bound chain at every `τ` in `taus`, `τ ∈ (0, 1]`.
pub fn bound_chain_check(theta: f64, taus: &[f64]) -> Result<BoundChainReport> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(out_of_range("theta", theta, "[0, pi/2]"));
    }
    let lambdas = bound_lambda_grid();
    let tol = TOL_CLOSED_FORM;
    let mut points = Vec::with_capacity(taus.len());
    let mut monotonicity_max = f64::NEG_INFINITY;
    let mut max_at_lambda_one = true;
    for &tau in taus {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(out_of_range("tau", tau, "(0, 1]"));
        }
        let x = theta * tau;
        let c2 = (2.0 * x).cos();
        let mut sup = f64::NEG_INFINITY;
        let mut bracket_max = f64::NEG_INFINITY;
        let mut bracket_at_one = f64::NAN;
        for &lambda in &lambdas {
            let root = (1.0 + lambda * lambda + 2.0 * lambda * c2).sqrt();
            monotonicity_max = monotonicity_max.max(-1.0 + (lambda + c2) / root);
            let term = tau * (1.0 - lambda + root);
            if lambda == 1.0 {
                bracket_at_one = term;
            }
            bracket_max = bracket_max.max(term);
            match gamma4_derivative_closed_form(lambda, tau, theta) {
                Ok(v) => sup = sup.max(v),
                Err(Error::SingularPoint { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if !(bracket_max <= bracket_at_one + tol) {
            max_at_lambda_one = false;
        }
        let t2 = tau * tau;
        let th2 = theta * theta;
        let th4 = th2 * th2;
        let half_angle_bound =
            tau * (2.0 + 2.0 * c2).max(0.0).sqrt() - (1.0 + t2) * 0.5 * theta * (2.0 * x).sin();
        let bracket = 2.0 * tau - (1.0 + t2) * theta * x.sin();
        let factored_bound = x.cos() * bracket;
        let quintic = (2.0 - th2) * tau - (th2 - th4 / 6.0) * tau.powi(3) + th4 / 6.0 * tau.powi(5);
        let polynomial = (2.0 - th2) * tau - (th2 - th4 / 3.0) * tau.powi(3);
        let holds = sup <= half_angle_bound + tol
            && half_angle_bound <= factored_bound + tol
            && bracket <= quintic + tol
            && quintic <= polynomial + tol
            && polynomial <= tol;
        points.push(BoundPoint {
            tau,
            sup_derivative: sup,
            half_angle_bound,
            factored_bound,
            bracket,
            quintic,
            polynomial,
            holds,
        });
    }
    let all_hold = points.iter().all(|p| p.holds) && monotonicity_max <= tol && max_at_lambda_one;
    Ok(BoundChainReport {
        theta,
        points,
        monotonicity_max,
        max_at_lambda_one,
        all_hold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReflectionCheck {
    pub lambda: f64,
    pub tau: f64,
    pub theta: f64,
    /// `D(λ)`.
    pub lhs: f64,
    /// `λ D(1/λ)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Tolerance of [`lambda_reflection_check`].
pub const REFLECTION_TOL: f64 = 1e-10;

/// Checks `D(λ) = λ D(1/λ)` for `0 < λ < 1`.
pub fn lambda_reflection_check(lambda: f64, tau: f64, theta: f64) -> Result<ReflectionCheck> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(out_of_range("lambda", lambda, "(0, 1)"));
    }
    let lhs = gamma4_derivative_closed_form(lambda, tau, theta)?;
    let rhs = lambda * gamma4_derivative_closed_form(1.0 / lambda, tau, theta)?;
    Ok(ReflectionCheck {
        lambda,
        tau,
        theta,
        lhs,
        rhs,
        holds: (lhs - rhs).abs() <= REFLECTION_TOL,
    })
}
