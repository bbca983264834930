//! Numerical toolkit for finite-dimensional dynamical maps: CP and TP checks,
//! intermediate maps and divisibility, trace-norm contractivity scans, and a
//! concrete qutrit family that is contractive on its images without being
//! P-divisible.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contractivity;
pub mod counterexample;
pub mod deriv;
pub mod divisibility;
pub mod error;
pub mod family;
pub mod linalg;
pub mod operator;
pub mod probes;
pub mod report;
pub mod suite;
pub mod superop;
pub mod tol;

pub use counterexample::{Counterexample, MapParams, RateFunction, Smoothing};
pub use error::{Error, Result};
pub use family::{ConjugatedFamily, DynamicalFamily, IdentityFamily};
pub use linalg::{CMat, CVec, C64};
pub use operator::{partial_trace, tensor, trace_norm, DensityOp, HermOp, Keep};
pub use probes::{random_probes, ProbeKind, ProbeSet};
pub use superop::{compose, is_image_nonincreasing, ChoiMatrix, KrausSet, SuperOp};
