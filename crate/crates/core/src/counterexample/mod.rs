//! A concrete qutrit family built from dephasing, a rank-lowering Kraus map,
//! a measure-prepare map and a rotation, glued on four time segments.

mod constants;
mod continuity;
mod maps;
mod params;

pub use constants::{rotated_ket, rotation, ConstantsTable, DIM};
pub use continuity::{continuity_report, derivative_continuity_report, JunctionGap, JunctionReport};
pub use maps::Counterexample;
pub use params::{MapParams, RateFunction, RateTable, Smoothing};
