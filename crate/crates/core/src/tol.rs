//! Numerical tolerances shared by every module.
//!
//! Each constant separates modelling error from floating-point noise for
//! one kind of check. Thresholds used in assertions elsewhere refer back
//! here rather than repeating literals.

/// Absolute Hermiticity tolerance for entries of a `HermOp`.
pub const TOL_HERM: f64 = 1e-12;

/// Relaxed Hermiticity tolerance (relative to the largest entry) for outputs
/// of superoperator application.
pub const TOL_HERM_APPLY: f64 = 1e-10;

/// Lowest eigenvalue still accepted as positive semidefinite (used as `>= -TOL_PSD`).
pub const TOL_PSD: f64 = 1e-10;

/// Trace tolerance for density operators.
pub const TOL_TRACE: f64 = 1e-12;

/// Trace-preservation tolerance for maps.
pub const TOL_TP: f64 = 1e-10;

/// Slack for `<= 0` assertions on finite-difference derivatives.
pub const TOL_DERIV: f64 = 1e-6;

/// Slack for `<= 0` assertions on closed-form derivative evaluations.
pub const TOL_CLOSED_FORM: f64 = 1e-12;

/// Relative singular-value cutoff for rank decisions and pseudoinverses.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Residual below which `V * Lambda_s = Lambda_t` is considered solved.
pub const TOL_RESIDUAL: f64 = 1e-8;

/// Eigenvalue cutoff for support projectors and their intersections.
pub const SUPPORT_CUTOFF: f64 = 1e-8;

/// A state with purity above `1 - PURITY_SLACK` counts as pure.
pub const PURITY_SLACK: f64 = 1e-8;

/// Default initial step of the right-derivative estimator.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Forcing-witness discrepancy above which non-P-divisibility is certified.
pub const TOL_DISCREPANCY: f64 = 1e-9;
