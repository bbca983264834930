use crate::counterexample::ConstantsTable;
use crate::operator::HermOp;

/// The probe `ρ_A - λ ρ_B`, spanning `Im(E3 E2 E1)` up to scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaProbe {
    pub lambda: f64,
}

impl LambdaProbe {
    pub fn new(lambda: f64) -> Self {
        Self { lambda }
    }

    /// `ρ_A - λ ρ_B`; trace `1 - λ`.
    pub fn operator(&self) -> HermOp {
        let k = ConstantsTable::new();
        k.rho_a.op() - &(k.rho_b.op() * self.lambda)
    }

    /// `|1><1| - λ|2><2|`, which `E3 E2 E1` maps to [`Self::operator`].
    pub fn preimage(&self) -> HermOp {
        HermOp::from_real_diagonal(&[1.0, -self.lambda, 0.0])
    }
}
