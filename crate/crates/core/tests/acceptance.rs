//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails when a required criterion fails. The contractivity half
//! of criterion 8 is reported but not required (see the README).

mod common;

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use common::{expm_taylor, max_diff, trace_norm_oracle};
use nonmarkov_core::contractivity::{
    bound_chain_check, closed_grid, gamma4_derivative_closed_form, gamma4_norm_closed_form,
    half_open_grid, lambda_reflection_check, norm_derivative_scan, stepped_grid, LambdaProbe,
    ScanConfig, ScanSummary,
};
use nonmarkov_core::counterexample::{continuity_report, derivative_continuity_report, rotated_ket, DIM};
use nonmarkov_core::divisibility::positive_forcing_witness;
use nonmarkov_core::linalg::{cr, matrix_unit, real_diagonal};
use nonmarkov_core::suite::{closed_form_grid_max, DEFAULT_SEED, EPSILON_LADDER};
use nonmarkov_core::tol::RANK_CUTOFF;
use nonmarkov_core::{
    is_image_nonincreasing, random_probes, trace_norm, CMat, Counterexample, Error, MapParams,
    ProbeKind, Result,
};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn family(theta: f64) -> Counterexample {
    Counterexample::new(MapParams::with_theta(theta)).expect("valid parameters")
}

fn projector(ket: &nonmarkov_core::CVec) -> CMat {
    ket * ket.adjoint()
}

/// PSD test by Cholesky of `m + tol·I`, independent of any eigensolver.
fn is_psd_cholesky(m: &CMat, tol: f64) -> bool {
    let n = m.nrows();
    let shifted = m + CMat::identity(n, n) * cr(tol);
    nalgebra::Cholesky::new(shifted).is_some()
}

fn criterion_1() -> Result<Outcome> {
    let cx = family(1.5);
    let probes = random_probes(DIM, 50, DEFAULT_SEED, ProbeKind::RandomHermitian)?;
    let mut min_eig = f64::INFINITY;
    let mut cholesky_ok = true;
    let mut tp = 0.0_f64;
    for t in closed_grid(0.0, 4.0, 200) {
        let m = cx.lambda_t(t)?;
        let choi = m.to_choi();
        min_eig = min_eig.min(choi.min_eigenvalue());
        cholesky_ok &= is_psd_cholesky(choi.op().matrix(), 1e-10);
        for x in &probes.probes {
            tp = tp.max((m.apply(x)?.trace() - x.trace()).abs());
        }
    }
    let gaps = continuity_report(&cx, &EPSILON_LADDER)?;
    let gaps_ok = gaps.iter().all(|r| r.is_strictly_decreasing() && r.final_gap() < 1e-3);
    let finals: Vec<String> = gaps.iter().map(|r| format!("{:.1e}", r.final_gap())).collect();
    outcome(
        min_eig >= -1e-10 && cholesky_ok && tp <= 1e-10 && gaps_ok,
        format!("min Choi eig {min_eig:.2e}, TP error {tp:.1e}, junction gaps [{}]", finals.join(", ")),
    )
}

fn criterion_2() -> Result<Outcome> {
    let theta = 1.5;
    let cx = family(theta);
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in 0..DIM {
            let x = matrix_unit(DIM, i, j);
            let unit = |k: usize| if i == j && j == k { 1.0 } else { 0.0 };
            let (a, b, c) = (unit(0), unit(1), unit(2));
            let expected = [
                (1.0, real_diagonal(&[a, b, c])),
                (2.0, real_diagonal(&[a, b + c, 0.0])),
                (3.0, real_diagonal(&[a / 2.0, (b + c) / 2.0, (a + b + c) / 2.0])),
            ];
            for (t, e) in expected {
                worst = worst.max(max_diff(&cx.lambda_t(t)?.apply_matrix(&x)?, &e));
            }
        }
    }
    let l4 = cx.lambda_t(4.0)?;
    let e11 = matrix_unit(DIM, 0, 0);
    worst = worst.max(max_diff(&l4.apply_matrix(&e11)?, &e11));
    worst = worst.max(max_diff(
        &l4.apply_matrix(&matrix_unit(DIM, 1, 1))?,
        &projector(&rotated_ket(theta)),
    ));
    outcome(worst <= 1e-12, format!("max entry error {worst:.2e}"))
}

fn criterion_3() -> Result<Outcome> {
    let theta = 1.5_f64;
    let w = positive_forcing_witness(&family(theta), 3.0, 4.0, RANK_CUTOFF)?;
    let Some(w) = w else {
        return outcome(false, "no witness at theta = 1.5");
    };
    let oracle = trace_norm_oracle(&(matrix_unit(DIM, 0, 0) - projector(&rotated_ket(theta))));
    let e3 = nonmarkov_core::linalg::basis_ket(DIM, 2);
    let shared_ok = (w.shared_vector.clone() - e3).norm() < 1e-10;
    let value_ok = (w.discrepancy - oracle).abs() <= 1e-9;

    let near = FRAC_PI_2 - 1e-3;
    let wn = positive_forcing_witness(&family(near), 3.0, 4.0, RANK_CUTOFF)?;
    let dn = wn.map_or(f64::NAN, |w| w.discrepancy);
    let near_ok = ((dn - 2e-3) / 2e-3).abs() <= 0.1;
    outcome(
        shared_ok && value_ok && near_ok,
        format!(
            "discrepancy {:.9} (oracle {oracle:.9}), near pi/2 {dn:.3e}",
            w.discrepancy
        ),
    )
}

fn contractivity_suite(params: MapParams) -> Result<(ScanSummary, f64, bool)> {
    let cx = Counterexample::new(params.clone())?;
    let probes = random_probes(DIM, 500, DEFAULT_SEED, ProbeKind::RandomHermitian)?;
    let mut config = ScanConfig::new(half_open_grid(0.0, params.t4, 200));
    config.seed = Some(DEFAULT_SEED);
    let scan = norm_derivative_scan(&cx, &probes.probes, &config)?;
    let (closed_max, _, _) = closed_form_grid_max(&params)?;
    let ok = scan.summary.max_rderiv <= 1e-6 && closed_max <= 1e-12;
    Ok((scan.summary, closed_max, ok))
}

fn criterion_4() -> Result<Outcome> {
    let (summary, closed_max, ok) = contractivity_suite(MapParams::with_theta(1.5))?;
    // the closed-form norm must agree with a direct trace norm of Γ⁴ for the derivative to mean anything
    let cx = family(1.5);
    let mut norm_err = 0.0_f64;
    for lambda in stepped_grid(0.0, 10.0, 0.5) {
        for tau in stepped_grid(0.0, 1.0, 0.1) {
            let direct = trace_norm_oracle(
                cx.gamma_family(4, tau)?.apply(&LambdaProbe::new(lambda).operator())?.matrix(),
            );
            norm_err = norm_err.max((direct - gamma4_norm_closed_form(lambda, tau, 1.5)?).abs());
        }
    }
    outcome(
        ok && norm_err <= 1e-9,
        format!(
            "scan max {:.2e} ({} violations), closed-form max {closed_max:.2e}, norm check {norm_err:.1e}",
            summary.max_rderiv, summary.violations
        ),
    )
}

/// One-sided finite difference of the direct Γ⁴ norm, second order.
fn direct_derivative(cx: &Counterexample, lambda: f64, tau: f64) -> Result<f64> {
    let h = 1e-5;
    let x = LambdaProbe::new(lambda).operator();
    let n = |s: f64| -> Result<f64> { Ok(trace_norm(&cx.gamma_family(4, s)?.apply(&x)?)) };
    if tau + 2.0 * h <= 1.0 {
        Ok((-3.0 * n(tau)? + 4.0 * n(tau + h)? - n(tau + 2.0 * h)?) / (2.0 * h))
    } else {
        Ok((3.0 * n(tau)? - 4.0 * n(tau - h)? + n(tau - 2.0 * h)?) / (2.0 * h))
    }
}

fn criterion_5() -> Result<Outcome> {
    let theta = 1.6_f64;
    let at_one = gamma4_derivative_closed_form(1.0, 1.0, theta)?;
    let substituted = 2.0 * theta.cos().abs() + 2.0 * theta * theta.sin();
    let fd_high = direct_derivative(&family(theta), 1.0, 1.0)?;
    let high_ok = at_one > 0.0 && (at_one - substituted).abs() <= 1e-9 && (at_one - fd_high).abs() <= 1e-5;

    let small = gamma4_derivative_closed_form(1.0, 0.01, 1.3)?;
    let fd_small = direct_derivative(&family(1.3), 1.0, 0.01)?;
    let small_ok = ((small - 0.0031) / 0.0031).abs() <= 0.2 && (small - fd_small).abs() <= 1e-6;
    outcome(
        high_ok && small_ok,
        format!(
            "theta 1.6 tau 1: {at_one:.6} (substituted {substituted:.6}); theta 1.3 tau 0.01: {small:.3e} (finite difference {fd_small:.3e})"
        ),
    )
}

fn criterion_6() -> Result<Outcome> {
    let chain = bound_chain_check(1.5, &stepped_grid(0.005, 1.0, 0.005))?;
    let mut worst_reflection = 0.0_f64;
    for lambda in stepped_grid(0.05, 0.95, 0.05) {
        for tau in stepped_grid(0.0, 1.0, 0.05) {
            match lambda_reflection_check(lambda, tau, 1.5) {
                Ok(r) => worst_reflection = worst_reflection.max((r.lhs - r.rhs).abs()),
                Err(Error::SingularPoint { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    outcome(
        chain.all_hold && chain.monotonicity_max <= 1e-10 && worst_reflection <= 1e-10,
        format!(
            "{} points, links hold: {}, monotonicity {:.1e}, reflection {worst_reflection:.1e}",
            chain.points.len(),
            chain.all_hold,
            chain.monotonicity_max
        ),
    )
}

fn criterion_7() -> Result<Outcome> {
    let cx = family(1.5);
    let l0 = cx.dephasing_generator().matrix().clone();
    let mut worst = 0.0_f64;
    for i in 1..10 {
        let tau = i as f64 / 10.0;
        let g = cx.params().gamma_rate.gamma_integral(tau);
        let dense = expm_taylor(&(&l0 * cr(g)));
        worst = worst.max(max_diff(cx.gamma_family(1, tau)?.matrix(), &dense));
        // off-diagonal decay read straight off the closed form
        let coh = cx.gamma_family(1, tau)?.apply_matrix(&matrix_unit(DIM, 0, 1))?;
        worst = worst.max((coh[(0, 1)].re - (-4.0 * g).exp()).abs());
    }
    outcome(worst <= 1e-10, format!("max deviation {worst:.2e}"))
}

fn criterion_8() -> Result<(Outcome, bool)> {
    let mut params = MapParams::with_theta(1.55);
    params.delta = 1.05;
    params.validate()?;
    let cx = Counterexample::new(params.clone())?;
    let reports = derivative_continuity_report(&cx, &EPSILON_LADDER)?;
    let smooth_ok = reports.iter().all(|r| r.is_strictly_decreasing());
    let finals: Vec<String> = reports.iter().map(|r| format!("{:.2e}", r.final_gap())).collect();
    let (summary, closed_max, contractive) = contractivity_suite(params)?;
    let detail = format!(
        "derivative gaps [{}] {}; contractivity {} (scan max {:.2e}, closed-form max {closed_max:.2e})",
        finals.join(", "),
        if smooth_ok { "decreasing" } else { "NOT decreasing" },
        if contractive { "holds" } else { "violated" },
        summary.max_rderiv
    );
    Ok((Outcome { pass: smooth_ok && contractive, detail }, smooth_ok))
}

fn criterion_9() -> Result<Outcome> {
    let cx = family(1.5);
    let rank = |t: f64| -> Result<usize> { Ok(cx.lambda_t(t)?.image_basis(RANK_CUTOFF).rank()) };
    let mut expected: Vec<(f64, usize)> = stepped_grid(0.0, 0.9, 0.1).into_iter().map(|t| (t, 9)).collect();
    expected.push((1.0, 3));
    expected.extend(stepped_grid(2.0, 3.0, 0.1).into_iter().map(|t| (t, 2)));
    expected.push((4.0, 2));
    let mut mismatches = 0;
    for &(t, r) in &expected {
        if rank(t)? != r {
            mismatches += 1;
        }
    }
    let report = is_image_nonincreasing(&cx, &closed_grid(3.0, 4.0, 11), RANK_CUTOFF)?;
    // |θ⟩⟨θ| against span{ρ_A, ρ_B}: Gram matrix [[2,1],[1,2]] on the diagonal, off-diagonals orthogonal
    let (s2, c2) = (1.5_f64.sin().powi(2), 1.5_f64.cos().powi(2));
    let oracle = (1.0 - 2.0 * (s2 * s2 - s2 * c2 + c2 * c2) / 3.0).sqrt();
    let measured = cx.lambda_t(3.0)?.image_basis(RANK_CUTOFF).residual_of(&projector(&rotated_ket(1.5)));
    let oracle_ok = (measured - oracle).abs() <= 1e-10;
    outcome(
        mismatches == 0 && !report.holds && report.worst_residual > 0.01 && oracle_ok,
        format!(
            "{mismatches} rank mismatches over {} points, inclusion holds: {}, worst residual {:.3e}, |theta> residual {measured:.6} (oracle {oracle:.6})",
            expected.len(),
            report.holds,
            report.worst_residual
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 dynamical-map validity", criterion_1),
        ("2 closed-form endpoints", criterion_2),
        ("3 non-P-divisibility", criterion_3),
        ("4 monotone contractivity", criterion_4),
        ("5 window tightness", criterion_5),
        ("6 bound chain", criterion_6),
        ("7 dephasing oracle", criterion_7),
        ("9 image structure", criterion_9),
    ];
    let mut required_failures = Vec::new();
    let mut lines = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        lines.push((name.to_string(), pass, detail, start.elapsed().as_secs_f64()));
        if !pass {
            required_failures.push(name.to_string());
        }
    }
    let start = Instant::now();
    let (pass8, detail8) = match criterion_8() {
        Ok((o, smooth_ok)) => {
            if !smooth_ok {
                required_failures.push("8 smooth variant (derivative continuity)".into());
            }
            (o.pass, o.detail)
        }
        Err(e) => {
            required_failures.push("8 smooth variant".into());
            (false, format!("error: {e}"))
        }
    };
    lines.insert(7, ("8 smooth variant".into(), pass8, detail8, start.elapsed().as_secs_f64()));

    println!();
    for (name, pass, detail, secs) in &lines {
        println!(
            "criterion {name:<26} {}  {detail} [{secs:.1}s]",
            if *pass { "PASS" } else { "FAIL" }
        );
    }
    if !pass8 {
        println!("note: criterion 8 contractivity is a known, documented failure of the rotation-only smoothing");
    }
    if required_failures.is_empty() {
        println!("acceptance: all required criteria hold");
    } else {
        println!("acceptance: required criteria failed: {}", required_failures.join(", "));
        std::process::exit(1);
    }
}
