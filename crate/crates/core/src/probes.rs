//! Seeded probe operators for contractivity scans.
//!
//! Probes are drawn from a ChaCha8 stream seeded with the caller's 64-bit
//! seed, so a `(dim, count, seed, kind)` tuple always reproduces the same
//! set bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{random_hermitian, random_mixed_state, random_pure_state, HermOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    /// Gaussian-Hermitian operators.
    RandomHermitian,
    /// `p1 rho1 - p2 rho2` with random states and a random bias `p1 ∈ [0, 1]`.
    StateDifference,
    /// Real diagonal probes, confined to the dephased (diagonal) subspace.
    ImageRestricted,
}

impl ProbeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::RandomHermitian => "random-hermitian",
            Self::StateDifference => "state-difference",
            Self::ImageRestricted => "image-restricted",
        }
    }
}

impl std::str::FromStr for ProbeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-hermitian" => Ok(Self::RandomHermitian),
            "state-difference" => Ok(Self::StateDifference),
            "image-restricted" => Ok(Self::ImageRestricted),
            other => Err(Error::InvalidParams(format!("unknown probe kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSet {
    pub probes: Vec<HermOp>,
    pub seed: u64,
    pub kind: ProbeKind,
}

impl ProbeSet {
    pub fn dim(&self) -> usize {
        self.probes[0].dim()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

fn random_state<R: Rng>(d: usize, rng: &mut R) -> HermOp {
    if rng.random::<bool>() {
        HermOp::projector(&random_pure_state(d, rng))
    } else {
        random_mixed_state(d, rng).into_op()
    }
}

pub fn random_probes(dim: usize, count: usize, seed: u64, kind: ProbeKind) -> Result<ProbeSet> {
    if count == 0 || dim == 0 {
        return Err(Error::InvalidOperand(format!(
            "need at least one probe of positive dimension (count={count}, dim={dim})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes = (0..count)
        .map(|_| match kind {
            ProbeKind::RandomHermitian => random_hermitian(dim, &mut rng),
            ProbeKind::StateDifference => {
                let p1: f64 = rng.random();
                let r1 = random_state(dim, &mut rng);
                let r2 = random_state(dim, &mut rng);
                &(&r1 * p1) - &(&r2 * (1.0 - p1))
            }
            ProbeKind::ImageRestricted => {
                let diag: Vec<f64> = (0..dim)
                    .map(|_| rng.sample(rand_distr::StandardNormal))
                    .collect();
                HermOp::from_real_diagonal(&diag)
            }
        })
        .collect();
    Ok(ProbeSet { probes, seed, kind })
}
