//! Right-derivative scans of `t ↦ ‖(Λ_t ⊗ 1_k)(X)‖₁`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::deriv::{right_derivative, richardson_nodes};
use crate::error::{Error, Result};
use crate::family::DynamicalFamily;
use crate::operator::{trace_norm, HermOp};
use crate::superop::SuperOp;
use crate::tol::{DEFAULT_STEP, TOL_DERIV};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Ascending times in `[0, horizon)`.
    pub grid: Vec<f64>,
    /// Ancilla dimension; 1 means no ancilla.
    pub k: usize,
    /// A row fails when its right derivative exceeds `slack`.
    pub slack: f64,
    /// Initial step of the right-derivative estimator.
    pub step: f64,
    /// Seed the probes were drawn with, recorded in the metadata.
    pub seed: Option<u64>,
}

impl ScanConfig {
    pub fn new(grid: Vec<f64>) -> Self {
        Self {
            grid,
            k: 1,
            slack: TOL_DERIV,
            step: DEFAULT_STEP,
            seed: None,
        }
    }
}

/// `n` evenly spaced points on `[start, end)`.
pub fn half_open_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + (end - start) * i as f64 / n as f64).collect()
}

/// `n` evenly spaced points on `[start, end]`, `n ≥ 2`.
pub fn closed_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "closed grid needs two points");
    (0..n)
        .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub probe_id: usize,
    pub k: usize,
    pub norm: f64,
    pub rderiv: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub max_rderiv: f64,
    pub argmax_t: f64,
    pub argmax_probe: usize,
    pub violations: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub seed: Option<u64>,
    pub grid_start: f64,
    pub grid_end: f64,
    pub grid_points: usize,
    pub probes: usize,
    pub k: usize,
    pub slack: f64,
    pub step: f64,
    /// Set for `k > 1`: the scan has no reference result to confirm.
    pub exploratory: bool,
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
    pub metadata: ScanMetadata,
}

const ATTEMPTS: usize = 3;

fn step_at(t: f64, step: f64, horizon: f64) -> f64 {
    step.min(horizon - t)
}

/// Scans every probe at every grid time.
///
/// Maps are computed once per abscissa the derivative estimator may visit,
/// so the cost is dominated by trace norms rather than map construction.
/// Rows are sorted by `(probe_id, t)` regardless of scheduling.
pub fn norm_derivative_scan<F: DynamicalFamily + ?Sized>(
    family: &F,
    probes: &[HermOp],
    config: &ScanConfig,
) -> Result<ScanReport> {
    let d = family.dim();
    let k = config.k;
    let horizon = family.horizon();
    if k == 0 {
        return Err(Error::InvalidParams("ancilla dimension k must be >= 1".into()));
    }
    if probes.is_empty() || config.grid.is_empty() {
        return Err(Error::InvalidParams("scan needs probes and grid points".into()));
    }
    if let Some(p) = probes.iter().find(|p| p.dim() != d * k) {
        return Err(Error::DimensionMismatch {
            expected: d * k,
            found: p.dim(),
        });
    }
    let grid = &config.grid;
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("grid must be strictly ascending".into()));
    }
    if !(grid[0] >= 0.0 && grid[grid.len() - 1] < horizon) {
        return Err(Error::InvalidParams(format!("grid must lie in [0, {horizon})")));
    }
    if !(config.step > 0.0) {
        return Err(Error::InvalidParams("step must be positive".into()));
    }

    let mut nodes: Vec<f64> = Vec::new();
    for &t in grid {
        let mut h = step_at(t, config.step, horizon);
        for _ in 0..ATTEMPTS {
            nodes.extend_from_slice(&richardson_nodes(t, h));
            h /= 8.0;
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let cache: HashMap<u64, SuperOp> = nodes
        .par_iter()
        .map(|&t| family.map_at(t).map(|m| (t.to_bits(), m)))
        .collect::<Result<_>>()?;

    let norm_at = |x: &HermOp, t: f64| -> Result<f64> {
        let owned;
        let map = match cache.get(&t.to_bits()) {
            Some(m) => m,
            None => {
                owned = family.map_at(t)?;
                &owned
            }
        };
        let y = if k == 1 { map.apply(x)? } else { map.apply_extended(x, k)? };
        Ok(trace_norm(&y))
    };

    let mut rows: Vec<ScanRow> = (0..probes.len())
        .into_par_iter()
        .flat_map_iter(|pid| grid.iter().map(move |&t| (pid, t)))
        .map(|(pid, t)| {
            let x = &probes[pid];
            let norm = norm_at(x, t)?;
            let h = step_at(t, config.step, horizon);
            let rderiv = right_derivative(|s| norm_at(x, s), t, h)?;
            let verdict = if rderiv > config.slack { Verdict::Fail } else { Verdict::Pass };
            Ok(ScanRow {
                t,
                probe_id: pid,
                k,
                norm,
                rderiv,
                verdict,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| a.probe_id.cmp(&b.probe_id).then(a.t.total_cmp(&b.t)));

    let worst = rows
        .iter()
        .max_by(|a, b| a.rderiv.total_cmp(&b.rderiv))
        .expect("nonempty scan");
    let violations = rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let summary = ScanSummary {
        max_rderiv: worst.rderiv,
        argmax_t: worst.t,
        argmax_probe: worst.probe_id,
        violations,
        passed: violations == 0,
    };
    let metadata = ScanMetadata {
        seed: config.seed,
        grid_start: grid[0],
        grid_end: grid[grid.len() - 1],
        grid_points: grid.len(),
        probes: probes.len(),
        k,
        slack: config.slack,
        step: config.step,
        exploratory: k > 1,
        parameters: family.parameters(),
    };
    Ok(ScanReport {
        rows,
        summary,
        metadata,
    })
}
