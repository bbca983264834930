//! Time-parametrised families of maps `t ↦ Λ_t`.

use std::collections::BTreeMap;

use crate::error::{out_of_range, Result};
use crate::linalg::CMat;
use crate::superop::{compose, SuperOp};

/// A dynamical family on `[0, horizon]`.
pub trait DynamicalFamily: Sync {
    fn dim(&self) -> usize;

    /// Largest admissible time.
    fn horizon(&self) -> f64;

    fn map_at(&self, t: f64) -> Result<SuperOp>;

    /// Named scalar parameters, recorded in report metadata.
    fn parameters(&self) -> BTreeMap<String, f64> {
        BTreeMap::new()
    }
}

/// `Λ_t = 1` for all `t`.
#[derive(Clone, Debug)]
pub struct IdentityFamily {
    pub dim: usize,
    pub horizon: f64,
}

impl DynamicalFamily for IdentityFamily {
    fn dim(&self) -> usize {
        self.dim
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn map_at(&self, t: f64) -> Result<SuperOp> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(out_of_range("t", t, format!("[0, {}]", self.horizon)));
        }
        Ok(SuperOp::identity(self.dim))
    }
}

/// `X ↦ U Λ_t(U† X U) U†` for a fixed unitary `U`.
pub struct ConjugatedFamily<'a, F: ?Sized> {
    inner: &'a F,
    conj_in: SuperOp,
    conj_out: SuperOp,
}

impl<'a, F: DynamicalFamily + ?Sized> ConjugatedFamily<'a, F> {
    pub fn new(inner: &'a F, unitary: &CMat) -> Self {
        let d = inner.dim();
        let u = unitary.clone();
        let u_dag = unitary.adjoint();
        let conj_out = SuperOp::from_fn(d, |x| &u * x * &u_dag);
        let conj_in = SuperOp::from_fn(d, |x| &u_dag * x * &u);
        Self {
            inner,
            conj_in,
            conj_out,
        }
    }
}

impl<F: DynamicalFamily + ?Sized> DynamicalFamily for ConjugatedFamily<'_, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    fn map_at(&self, t: f64) -> Result<SuperOp> {
        compose(&self.conj_out, &compose(&self.inner.map_at(t)?, &self.conj_in)?)
    }

    fn parameters(&self) -> BTreeMap<String, f64> {
        self.inner.parameters()
    }
}
