//! Gaps of `Λ` (and of its finite-difference derivative) across the junctions
//! `t1, t2, t3`.

use serde::Serialize;

use crate::error::{out_of_range, Result};
use crate::superop::SuperOp;

use super::maps::Counterexample;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct JunctionGap {
    pub epsilon: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct JunctionReport {
    /// 1, 2 or 3.
    pub junction: usize,
    pub time: f64,
    pub gaps: Vec<JunctionGap>,
}

impl JunctionReport {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1].gap < w[0].gap)
    }

    pub fn final_gap(&self) -> f64 {
        self.gaps.last().map_or(f64::NAN, |g| g.gap)
    }
}

fn check_ladder(cx: &Counterexample, ladder: &[f64]) -> Result<()> {
    let half = cx.params().min_segment() / 2.0;
    for &eps in ladder {
        if !(eps > 0.0 && eps < half) {
            return Err(out_of_range("epsilon", eps, format!("(0, {half})")));
        }
    }
    Ok(())
}

fn per_junction(
    cx: &Counterexample,
    ladder: &[f64],
    gap: impl Fn(f64, f64) -> Result<f64>,
) -> Result<Vec<JunctionReport>> {
    check_ladder(cx, ladder)?;
    let p = cx.params();
    [p.t1, p.t2, p.t3]
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let gaps = ladder
                .iter()
                .map(|&epsilon| {
                    Ok(JunctionGap {
                        epsilon,
                        gap: gap(t, epsilon)?,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(JunctionReport {
                junction: i + 1,
                time: t,
                gaps,
            })
        })
        .collect()
}

/// `‖Λ_{t-ε} - Λ_{t+ε}‖_max` at each junction for each `ε` in `ladder`.
pub fn continuity_report(cx: &Counterexample, ladder: &[f64]) -> Result<Vec<JunctionReport>> {
    per_junction(cx, ladder, |t, eps| {
        Ok(cx.lambda_t(t - eps)?.max_abs_diff(&cx.lambda_t(t + eps)?))
    })
}

/// `‖Λ'(t-ε) - Λ'(t+ε)‖_max`, each derivative a central difference with
/// step `ε/4` that stays on its own side of the junction.
pub fn derivative_continuity_report(
    cx: &Counterexample,
    ladder: &[f64],
) -> Result<Vec<JunctionReport>> {
    let deriv = |s: f64, h: f64| -> Result<SuperOp> {
        let diff = &cx.lambda_t(s + h)? - &cx.lambda_t(s - h)?;
        Ok(&diff * (0.5 / h))
    };
    per_junction(cx, ladder, |t, eps| {
        let h = eps / 4.0;
        Ok(deriv(t - eps, h)?.max_abs_diff(&deriv(t + eps, h)?))
    })
}
