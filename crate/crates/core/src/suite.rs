//! The end-to-end verification suite for the qutrit family.
//!
//! Each check carries a short tag. A run passes when no check fails and no
//! check is inconclusive; skipped checks do not count against it.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contractivity::{
    bound_chain_check, closed_grid, gamma4_derivative_smoothed, gamma4_norm_smoothed,
    half_open_grid, lambda_reflection_check, norm_derivative_scan, stepped_grid,
    theta_window_sweep, LambdaProbe, ScanConfig, ScanReport,
};
use crate::counterexample::{
    continuity_report, derivative_continuity_report, rotated_ket, Counterexample, MapParams, DIM,
};
use crate::divisibility::positive_forcing_witness;
use crate::error::{Error, Result};
use crate::linalg::{self, cr, matrix_unit, real_diagonal};
use crate::operator::trace_norm;
use crate::probes::{random_probes, ProbeKind};
use crate::tol::{
    RANK_CUTOFF, TOL_CLOSED_FORM, TOL_DERIV, TOL_DISCREPANCY, TOL_PSD, TOL_TP,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// `ε` ladder for the junction checks.
pub const EPSILON_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl CheckStatus {
    pub fn is_ok(self) -> bool {
        matches!(self, Self::Pass | Self::Skipped)
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Inconclusive => "INCONCLUSIVE",
            Self::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub tag: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    pub grid_points: usize,
    pub probes: usize,
    pub seed: u64,
    pub slack: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_points: 100,
            probes: 200,
            seed: DEFAULT_SEED,
            slack: TOL_DERIV,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub params: MapParams,
    pub options: VerifyOptions,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub scan: Option<ScanReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.status.is_ok())
    }
}

fn check(tag: &'static str, f: impl FnOnce() -> Result<(CheckStatus, String)>) -> CheckResult {
    match f() {
        Ok((status, detail)) => CheckResult { tag, status, detail },
        Err(e) => CheckResult {
            tag,
            status: CheckStatus::Fail,
            detail: format!("error: {e}"),
        },
    }
}

/// Smallest Choi eigenvalue and largest trace defect over a closed grid on `[0, t4]`.
pub fn dynamical_map_defects(cx: &Counterexample, points: usize, seed: u64) -> Result<(f64, f64)> {
    let probes = random_probes(DIM, 50, seed, ProbeKind::RandomHermitian)?;
    let mut min_eig = f64::INFINITY;
    let mut tp = 0.0_f64;
    for t in closed_grid(0.0, cx.params().t4, points.max(2)) {
        let m = cx.lambda_t(t)?;
        min_eig = min_eig.min(m.to_choi().min_eigenvalue());
        for x in &probes.probes {
            tp = tp.max((m.apply(x)?.trace() - x.trace()).abs());
        }
    }
    Ok((min_eig, tp))
}

/// Largest entrywise error of `Λ` at `t1, t2, t3, t4` against the closed forms.
pub fn endpoint_defect(cx: &Counterexample) -> Result<f64> {
    let p = cx.params();
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in 0..DIM {
            let x = matrix_unit(DIM, i, j);
            let d = |k: usize| if i == j && i == k { 1.0 } else { 0.0 };
            let (x11, x22, x33) = (d(0), d(1), d(2));
            let expected = [
                real_diagonal(&[x11, x22, x33]),
                real_diagonal(&[x11, x22 + x33, 0.0]),
                real_diagonal(&[x11 / 2.0, (x22 + x33) / 2.0, (x11 + x22 + x33) / 2.0]),
            ];
            for (t, e) in [p.t1, p.t2, p.t3].into_iter().zip(&expected) {
                worst = worst.max(linalg::max_abs_diff(&cx.lambda_t(t)?.apply_matrix(&x)?, e));
            }
        }
    }
    let l4 = cx.lambda_t(p.t4)?;
    let ket = rotated_ket(p.theta);
    worst = worst.max(linalg::max_abs_diff(
        &l4.apply_matrix(&matrix_unit(DIM, 0, 0))?,
        &matrix_unit(DIM, 0, 0),
    ));
    worst = worst.max(linalg::max_abs_diff(
        &l4.apply_matrix(&matrix_unit(DIM, 1, 1))?,
        &(&ket * ket.adjoint()),
    ));
    Ok(worst)
}

/// Largest error of the closed-form `Γ¹` against `exp(g(τ) L0)` for `τ ∈ {0.1, …, 0.9}`.
pub fn gamma1_oracle_defect(cx: &Counterexample) -> Result<f64> {
    let l0 = cx.dephasing_generator().matrix();
    let mut worst = 0.0_f64;
    for i in 1..10 {
        let tau = i as f64 / 10.0;
        let g = cx.params().gamma_rate.gamma_integral(tau);
        let dense = (l0 * cr(g)).exp();
        worst = worst.max(linalg::max_abs_diff(cx.gamma_family(1, tau)?.matrix(), &dense));
    }
    Ok(worst)
}

/// Image ranks by segment: `(expected, found)` for each grid point checked.
pub fn image_rank_mismatches(cx: &Counterexample, points: usize) -> Result<Vec<(f64, usize, usize)>> {
    let p = cx.params();
    let mut bad = Vec::new();
    let mut grid = closed_grid(0.0, p.t4, points.max(2));
    grid.extend([p.t1, p.t2, p.t3, p.t4]);
    for t in grid {
        let (seg, tau) = cx.segment(t)?;
        let expected = match seg {
            // the off-diagonal singular values are (1-τ)⁴ relative to 1
            1 if (1.0 - tau).powi(4) <= 10.0 * RANK_CUTOFF => continue,
            1 => 9,
            // likewise e^{-f1(τ)} for the third direction on the second segment
            2 if (-p.f1.exponent(tau)).exp() <= 10.0 * RANK_CUTOFF => continue,
            2 => 3,
            // at τ = 1 the two output states merge as θ → π/2
            4 if tau == 1.0 && p.theta.cos().abs() < 1e-3 => continue,
            _ => 2,
        };
        let found = cx.lambda_t(t)?.image_basis(RANK_CUTOFF).rank();
        if found != expected {
            bad.push((t, expected, found));
        }
    }
    Ok(bad)
}

/// Projection residual of `Im(Λ_t4)` onto `Im(Λ_t3)`.
pub fn last_segment_inclusion_residual(cx: &Counterexample) -> Result<f64> {
    let p = cx.params();
    let early = cx.lambda_t(p.t3)?.image_basis(RANK_CUTOFF);
    let late = cx.lambda_t(p.t4)?.image_basis(RANK_CUTOFF);
    Ok(early.inclusion_residual(&late))
}

/// Maximum of the (possibly smoothed) closed-form derivative over
/// `λ ∈ [0, 10]` step 0.1 and `τ ∈ [0, 1]` step 0.01, skipping the singular point.
pub fn closed_form_grid_max(params: &MapParams) -> Result<(f64, f64, f64)> {
    let mut best = (f64::NEG_INFINITY, f64::NAN, f64::NAN);
    for tau in stepped_grid(0.0, 1.0, 0.01) {
        for lambda in stepped_grid(0.0, 10.0, 0.1) {
            match gamma4_derivative_smoothed(lambda, tau, params.theta, params.delta, params.smoothing) {
                Ok(v) if v > best.0 => best = (v, lambda, tau),
                Ok(_) | Err(Error::SingularPoint { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(best)
}

/// Largest difference between the closed-form norm and the trace norm of
/// `Γ⁴_τ(ρ_A - λρ_B)` over seeded `(λ, τ)` samples.
pub fn closed_form_norm_defect(cx: &Counterexample, samples: usize, seed: u64) -> Result<f64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let lambda: f64 = rng.random_range(0.0..10.0);
        let tau: f64 = rng.random_range(0.0..=1.0);
        let map = cx.gamma_family(4, tau)?;
        let direct = trace_norm(&map.apply(&LambdaProbe::new(lambda).operator())?);
        let closed = gamma4_norm_smoothed(
            lambda,
            tau,
            cx.params().theta,
            cx.params().delta,
            cx.params().smoothing,
        )?;
        worst = worst.max((direct - closed).abs());
    }
    Ok(worst)
}

/// Runs every check for `params`.
pub fn run_verification(params: &MapParams, options: &VerifyOptions) -> Result<VerificationReport> {
    let cx = Counterexample::new(params.clone())?;
    let p = cx.params();
    let mut checks = Vec::new();

    checks.push(check("dynamical-map", || {
        let (min_eig, tp) = dynamical_map_defects(&cx, 200, options.seed)?;
        let identity_ok = cx.lambda_t(0.0)? == crate::superop::SuperOp::identity(DIM);
        Ok((
            CheckStatus::from_bool(min_eig >= -TOL_PSD && tp <= TOL_TP && identity_ok),
            format!("min Choi eigenvalue {min_eig:.3e}, max trace defect {tp:.3e}"),
        ))
    }));

    checks.push(check("continuity", || {
        let reports = continuity_report(&cx, &EPSILON_LADDER)?;
        let ok = reports
            .iter()
            .all(|r| r.is_strictly_decreasing() && r.final_gap() < 1e-3);
        let finals: Vec<String> = reports.iter().map(|r| format!("{:.2e}", r.final_gap())).collect();
        Ok((
            CheckStatus::from_bool(ok),
            format!("final junction gaps [{}]", finals.join(", ")),
        ))
    }));

    checks.push(check("endpoints", || {
        let worst = endpoint_defect(&cx)?;
        Ok((
            CheckStatus::from_bool(worst <= 1e-12),
            format!("max entry error {worst:.3e}"),
        ))
    }));

    checks.push(check("not-P-divisible", || {
        let expected = 2.0 * p.theta.cos().abs();
        match positive_forcing_witness(&cx, p.t3, p.t4, RANK_CUTOFF)? {
            None => Ok((CheckStatus::Inconclusive, "no forcing configuration found".into())),
            Some(w) if w.discrepancy <= TOL_DISCREPANCY => Ok((
                CheckStatus::Inconclusive,
                format!("forced targets coincide (discrepancy {:.3e})", w.discrepancy),
            )),
            Some(w) => Ok((
                CheckStatus::from_bool((w.discrepancy - expected).abs() <= 1e-9),
                format!("discrepancy {:.9} (2|cos theta| = {expected:.9})", w.discrepancy),
            )),
        }
    }));

    let mut scan = None;
    checks.push(check("contractivity", || {
        let probes = random_probes(DIM, options.probes, options.seed, ProbeKind::RandomHermitian)?;
        let mut config = ScanConfig::new(half_open_grid(0.0, p.t4, options.grid_points));
        config.slack = options.slack;
        config.seed = Some(options.seed);
        let report = norm_derivative_scan(&cx, &probes.probes, &config)?;
        let s = &report.summary;
        let detail = format!(
            "max right derivative {:.3e} at t = {:.4} (probe {}), {} violations",
            s.max_rderiv, s.argmax_t, s.argmax_probe, s.violations
        );
        let status = CheckStatus::from_bool(s.passed);
        scan = Some(report);
        Ok((status, detail))
    }));

    checks.push(check("closed-form", || {
        let (max, lambda, tau) = closed_form_grid_max(p)?;
        let norm_err = closed_form_norm_defect(&cx, 200, options.seed)?;
        Ok((
            CheckStatus::from_bool(max <= TOL_CLOSED_FORM && norm_err <= 1e-10),
            format!("max derivative {max:.3e} at lambda = {lambda:.1}, tau = {tau:.2}; norm error {norm_err:.1e}"),
        ))
    }));

    checks.push(check("gamma1-oracle", || {
        let worst = gamma1_oracle_defect(&cx)?;
        Ok((
            CheckStatus::from_bool(worst <= 1e-10),
            format!("max deviation from dense exponential {worst:.3e}"),
        ))
    }));

    checks.push(check("image-structure", || {
        let bad = image_rank_mismatches(&cx, 200)?;
        let residual = last_segment_inclusion_residual(&cx)?;
        Ok((
            CheckStatus::from_bool(bad.is_empty() && residual > 0.01),
            format!("{} rank mismatches, last-segment inclusion residual {residual:.3e}", bad.len()),
        ))
    }));

    checks.push(check("bounds", || {
        if p.theta > std::f64::consts::FRAC_PI_2 {
            return Ok((CheckStatus::Fail, "theta above pi/2: bound chain does not apply".into()));
        }
        let chain = bound_chain_check(p.theta, &stepped_grid(0.005, 1.0, 0.005))?;
        let mut reflection_ok = true;
        for lambda in stepped_grid(0.05, 0.95, 0.05) {
            for tau in stepped_grid(0.0, 1.0, 0.05) {
                match lambda_reflection_check(lambda, tau, p.theta) {
                    Ok(r) => reflection_ok &= r.holds,
                    Err(Error::SingularPoint { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let broken = chain.points.iter().filter(|q| !q.holds).count();
        Ok((
            CheckStatus::from_bool(chain.all_hold && reflection_ok),
            format!(
                "{broken} broken links, lambda monotonicity max {:.2e}, reflection {}",
                chain.monotonicity_max,
                if reflection_ok { "ok" } else { "broken" }
            ),
        ))
    }));

    checks.push(check("tightness", || {
        let taus = stepped_grid(0.0, 1.0, 0.01);
        let lambdas = stepped_grid(0.0, 10.0, 0.1);
        let rows = theta_window_sweep(&[1.3, 1.45, 1.6], &taus, &lambdas)?;
        let below = &rows[0];
        let inside = &rows[1];
        let above = &rows[2];
        let ok = below.first_positive_tau.is_some_and(|t| t < 0.1)
            && !inside.positive
            && above.positive
            && above.argmax_tau == 1.0;
        Ok((
            CheckStatus::from_bool(ok),
            format!(
                "theta 1.3 first positive tau {:?}; theta 1.45 max {:.1e}; theta 1.6 max {:.3} at tau {}",
                below.first_positive_tau, inside.max_derivative, above.max_derivative, above.argmax_tau
            ),
        ))
    }));

    checks.push(check("smooth-derivative", || {
        if p.delta <= 1.0 {
            return Ok((CheckStatus::Skipped, "delta = 1".into()));
        }
        let reports = derivative_continuity_report(&cx, &EPSILON_LADDER)?;
        let ok = reports.iter().all(|r| r.is_strictly_decreasing());
        let finals: Vec<String> = reports.iter().map(|r| format!("{:.2e}", r.final_gap())).collect();
        Ok((
            CheckStatus::from_bool(ok),
            format!("final derivative gaps [{}]", finals.join(", ")),
        ))
    }));

    Ok(VerificationReport {
        params: params.clone(),
        options: options.clone(),
        checks,
        scan,
    })
}

/// `ρ_A - λρ_B` evaluated directly through `Γ⁴`, for cross-checks.
pub fn gamma4_norm_direct(cx: &Counterexample, lambda: f64, tau: f64) -> Result<f64> {
    Ok(trace_norm(&cx.gamma_family(4, tau)?.apply(&LambdaProbe::new(lambda).operator())?))
}

/// Norm formula on `[t1, t2)` for diagonal probes:
/// `|x11| + |x22 + (1 - e^{-f1}) x33| + e^{-f1} |x33|`.
pub fn segment2_norm_formula(cx: &Counterexample, x: &[f64; 3], tau: f64) -> f64 {
    let e = (-cx.params().f1.exponent(tau)).exp();
    x[0].abs() + (x[1] + (1.0 - e) * x[2]).abs() + e * x[2].abs()
}
