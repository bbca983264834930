//! Shared fixtures for the benchmarks.

use nonmarkov_core::{Counterexample, HermOp, MapParams, ProbeKind, ProbeSet};

pub fn default_family() -> Counterexample {
    Counterexample::new(MapParams::default()).expect("default parameters are valid")
}

pub fn probes(dim: usize, count: usize) -> ProbeSet {
    nonmarkov_core::random_probes(dim, count, 7, ProbeKind::RandomHermitian)
        .expect("count > 0")
}

pub fn hermitian(dim: usize) -> HermOp {
    probes(dim, 1).probes.remove(0)
}
