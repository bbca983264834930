//! Trace-norm contractivity: numerical scans for any family and closed-form
//! analysis of the last segment of the qutrit family.

mod closed_form;
mod probe;
mod scan;
mod sweep;

pub use closed_form::{
    gamma4_derivative_closed_form, gamma4_derivative_smoothed, gamma4_norm_closed_form,
    gamma4_norm_smoothed, SINGULAR_CUTOFF,
};
pub use probe::LambdaProbe;
pub use scan::{
    closed_grid, half_open_grid, norm_derivative_scan, ScanConfig, ScanMetadata, ScanReport,
    ScanRow, ScanSummary, Verdict,
};
pub use sweep::{
    bound_chain_check, bound_lambda_grid, lambda_reflection_check, stepped_grid,
    theta_window_sweep, theta_window_sweep_smoothed, BoundChainReport, BoundPoint,
    ReflectionCheck, SweepRow, REFLECTION_TOL,
};
