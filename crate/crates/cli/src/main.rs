use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nonmarkov_core::contractivity::{
    bound_chain_check, half_open_grid, norm_derivative_scan, stepped_grid,
    theta_window_sweep_smoothed, LambdaProbe, ScanConfig,
};
use nonmarkov_core::counterexample::DIM;
use nonmarkov_core::divisibility::{cp_divisibility_scan, positive_forcing_witness};
use nonmarkov_core::report::{write_csv, write_json};
use nonmarkov_core::suite::{run_verification, VerifyOptions, DEFAULT_SEED};
use nonmarkov_core::tol::{RANK_CUTOFF, TOL_DERIV};
use nonmarkov_core::{random_probes, Counterexample, MapParams, ProbeKind, Smoothing};

const EXPLORATORY: &str = "exploratory: ancilla-extended scan, no reference result to compare against";

#[derive(Parser)]
#[command(name = "nonmarkov", version, about = "Verify and explore the qutrit dynamical map")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Parameter file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Rotation angle in radians.
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Smoothing exponent (>= 1).
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Where the smoothing exponent enters the last segment.
    #[arg(long, global = true, value_enum)]
    smoothing: Option<SmoothingArg>,
    /// Rate functions for the decay and mixing segments.
    #[arg(long, global = true, value_enum)]
    rate: Option<RateArg>,
    /// Seed for probes and sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothingArg {
    Rotation,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum RateArg {
    DefaultPole,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    RandomHermitian,
    StateDifference,
    ImageRestricted,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check; exit 0 only if all pass.
    Verify {
        /// Time grid points for the contractivity scan.
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Number of random Hermitian probes.
        #[arg(long, default_value_t = 200)]
        probes: usize,
        /// Largest right derivative still counted as nonincreasing.
        #[arg(long, default_value_t = TOL_DERIV)]
        slack: f64,
    },
    /// Right-derivative scan of trace norms along the family.
    Scan {
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 200)]
        probes: usize,
        /// Ancilla dimension; values above 1 scan (Λ_t ⊗ 1_k)(X).
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = TOL_DERIV)]
        slack: f64,
        #[arg(long, value_enum, default_value = "random-hermitian")]
        probe_kind: ProbeArg,
        /// Use the probes |1><1| - λ|2><2| instead of random ones (repeatable).
        #[arg(long = "lambda", conflicts_with = "k")]
        lambdas: Vec<f64>,
        /// Start of the time grid.
        #[arg(long, default_value_t = 0.0)]
        from: f64,
    },
    /// Intermediate maps and CP-divisibility verdicts on a time grid.
    Divisibility {
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
    /// Sign of the closed-form derivative over a range of angles.
    Sweep {
        #[arg(long, default_value_t = 1.0)]
        theta_min: f64,
        #[arg(long, default_value_t = 1.7)]
        theta_max: f64,
        #[arg(long, default_value_t = 0.1)]
        theta_step: f64,
        #[arg(long, default_value_t = 0.01)]
        tau_step: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.1)]
        lambda_step: f64,
    },
    /// Pointwise check of the upper-bound chain for the derivative.
    Bounds {
        #[arg(long, default_value_t = 0.005)]
        tau_step: f64,
    },
}

fn build_params(c: &Common) -> Result<MapParams> {
    let mut p = match &c.config {
        Some(path) => MapParams::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => MapParams::default(),
    };
    if let Some(theta) = c.theta {
        p.theta = theta;
    }
    if let Some(delta) = c.delta {
        p.delta = delta;
    }
    if let Some(s) = c.smoothing {
        p.smoothing = match s {
            SmoothingArg::Rotation => Smoothing::Rotation,
            SmoothingArg::Full => Smoothing::Full,
        };
    }
    if let Some(RateArg::DefaultPole) = c.rate {
        p.gamma_rate = Default::default();
        p.f1 = Default::default();
        p.f2 = Default::default();
    }
    p.validate()?;
    Ok(p)
}

fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[derive(Serialize)]
struct ScanSummaryFile<'a> {
    theta: f64,
    delta: f64,
    probe_kind: &'a str,
    label: Option<&'a str>,
    summary: &'a nonmarkov_core::contractivity::ScanSummary,
    metadata: &'a nonmarkov_core::contractivity::ScanMetadata,
}

fn run(cli: Cli) -> Result<bool> {
    let params = build_params(&cli.common).map_err(Usage)?;
    let out = &cli.common.out;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let seed = cli.common.seed;

    match cli.command {
        Command::Verify { grid, probes, slack } => {
            let options = VerifyOptions {
                grid_points: grid,
                probes,
                seed,
                slack,
            };
            let report = run_verification(&params, &options)?;
            for c in &report.checks {
                println!("{:<13} {:<18} {}", c.status, c.tag, c.detail);
            }
            if let Some(scan) = &report.scan {
                write_csv(out_file(out, "scan.csv"), &scan.rows)?;
            }
            write_json(out_file(out, "verify.json"), "verify", &report)?;
            let failing: Vec<&str> = report.failing().map(|c| c.tag).collect();
            if failing.is_empty() {
                println!("all checks passed");
            } else {
                eprintln!("failing checks: {}", failing.join(", "));
            }
            Ok(failing.is_empty())
        }
        Command::Scan {
            grid,
            probes,
            k,
            slack,
            probe_kind,
            lambdas,
            from,
        } => {
            let cx = Counterexample::new(params.clone())?;
            let (ops, kind) = if lambdas.is_empty() {
                let kind = match probe_kind {
                    ProbeArg::RandomHermitian => ProbeKind::RandomHermitian,
                    ProbeArg::StateDifference => ProbeKind::StateDifference,
                    ProbeArg::ImageRestricted => ProbeKind::ImageRestricted,
                };
                let set = random_probes(DIM * k, probes, seed, kind)?;
                (set.probes, kind.as_str().to_string())
            } else {
                let ops = lambdas.iter().map(|&l| LambdaProbe::new(l).preimage()).collect();
                (ops, "lambda".to_string())
            };
            let mut config = ScanConfig::new(half_open_grid(from, params.t4, grid));
            config.k = k;
            config.slack = slack;
            config.seed = lambdas.is_empty().then_some(seed);
            let report = norm_derivative_scan(&cx, &ops, &config)?;
            let label = (k > 1).then_some(EXPLORATORY);
            write_csv(out_file(out, "scan.csv"), &report.rows)?;
            write_json(
                out_file(out, "scan.json"),
                "scan",
                &ScanSummaryFile {
                    theta: params.theta,
                    delta: params.delta,
                    probe_kind: &kind,
                    label,
                    summary: &report.summary,
                    metadata: &report.metadata,
                },
            )?;
            if let Some(l) = label {
                println!("{l}");
            }
            let s = &report.summary;
            println!(
                "{} rows, max right derivative {:.3e} at t = {:.4} (probe {}), {} violations",
                report.rows.len(),
                s.max_rderiv,
                s.argmax_t,
                s.argmax_probe,
                s.violations
            );
            Ok(s.passed)
        }
        Command::Divisibility { grid } => {
            let cx = Counterexample::new(params.clone())?;
            let times = nonmarkov_core::contractivity::closed_grid(0.0, params.t4, grid.max(2));
            let rows = cp_divisibility_scan(&cx, &times, RANK_CUTOFF)?;
            write_csv(out_file(out, "divisibility.csv"), &rows)?;
            let witness = positive_forcing_witness(&cx, params.t3, params.t4, RANK_CUTOFF)?;
            #[derive(Serialize)]
            struct Witness {
                s: f64,
                t: f64,
                inputs: (usize, usize),
                shared_vector: Vec<(f64, f64)>,
                discrepancy: f64,
                certifies: bool,
            }
            let w = witness.as_ref().map(|w| Witness {
                s: params.t3,
                t: params.t4,
                inputs: w.inputs,
                shared_vector: w.shared_vector.iter().map(|z| (z.re, z.im)).collect(),
                discrepancy: w.discrepancy,
                certifies: w.certifies(),
            });
            write_json(out_file(out, "divisibility.json"), "divisibility", &w)?;
            for r in &rows {
                println!("[{:.4}, {:.4}] {:?} min Choi eigenvalue {:.3e}", r.s, r.t, r.verdict, r.min_choi_eig);
            }
            match &w {
                Some(w) => println!("forcing witness on [t3, t4]: discrepancy {:.9}", w.discrepancy),
                None => println!("no forcing witness on [t3, t4]"),
            }
            Ok(true)
        }
        Command::Sweep {
            theta_min,
            theta_max,
            theta_step,
            tau_step,
            lambda_max,
            lambda_step,
        } => {
            if !(theta_step > 0.0 && tau_step > 0.0 && lambda_step > 0.0) || theta_max < theta_min {
                return Err(Usage(anyhow::anyhow!("sweep steps must be positive and theta_max >= theta_min")).into());
            }
            let thetas = stepped_grid(theta_min, theta_max, theta_step);
            let rows = theta_window_sweep_smoothed(
                &thetas,
                &stepped_grid(0.0, 1.0, tau_step),
                &stepped_grid(0.0, lambda_max, lambda_step),
                params.delta,
                params.smoothing,
            )?;
            write_csv(out_file(out, "sweep.csv"), &rows)?;
            write_json(out_file(out, "sweep.json"), "sweep", &rows)?;
            for r in &rows {
                println!(
                    "theta {:.4}: max {:+.3e} at lambda {:.2}, tau {:.3}{}",
                    r.theta,
                    r.max_derivative,
                    r.argmax_lambda,
                    r.argmax_tau,
                    if r.positive { "  positive" } else { "" }
                );
            }
            Ok(true)
        }
        Command::Bounds { tau_step } => {
            if tau_step.is_nan() || tau_step <= 0.0 {
                return Err(Usage(anyhow::anyhow!("tau step must be positive")).into());
            }
            if params.theta > FRAC_PI_2 {
                return Err(Usage(anyhow::anyhow!("bounds need theta <= pi/2")).into());
            }
            let report = bound_chain_check(params.theta, &stepped_grid(tau_step, 1.0, tau_step))?;
            write_csv(out_file(out, "bounds.csv"), &report.points)?;
            write_json(out_file(out, "bounds.json"), "bounds", &report)?;
            let broken = report.points.iter().filter(|p| !p.holds).count();
            println!(
                "{} points, {broken} broken, lambda monotonicity max {:.2e}, max at lambda = 1: {}",
                report.points.len(),
                report.monotonicity_max,
                report.max_at_lambda_one
            );
            println!("{}", if report.all_hold { "bound chain holds" } else { "bound chain broken" });
            Ok(report.all_hold)
        }
    }
}

/// Marks errors caused by bad input, reported with exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
