use std::collections::BTreeMap;

use crate::error::{out_of_range, Error, Result};
use crate::family::DynamicalFamily;
use crate::linalg::{cr, CMat};
use crate::superop::{compose, KrausSet, SuperOp};

use super::constants::{rotated_ket, ConstantsTable, DIM};
use super::params::{MapParams, Smoothing};

/// The four-segment qutrit family `Λ_t` on `[0, t4]`.
///
/// | segment       | map                    |
/// |---------------|------------------------|
/// | `[0, t1)`     | `Γ¹(t/t1)`             |
/// | `[t1, t2)`    | `Γ²(τ) E1`             |
/// | `[t2, t3)`    | `Γ³(τ) E2 E1`          |
/// | `[t3, t4]`    | `Γ⁴(τ) E3 E2 E1`       |
///
/// with `τ = (t - t_i)/(t_{i+1} - t_i)` on each segment.
#[derive(Clone, Debug)]
pub struct Counterexample {
    params: MapParams,
    constants: ConstantsTable,
    e: [SuperOp; 4],
    e21: SuperOp,
    e321: SuperOp,
    dephasing: SuperOp,
}

impl Counterexample {
    pub fn new(params: MapParams) -> Result<Self> {
        params.validate()?;
        let k = ConstantsTable::new();
        let half = cr(0.5);
        let e1 = SuperOp::from_kraus(&KrausSet::new(vec![
            CMat::identity(DIM, DIM) * half,
            &k.d1 * half,
            &k.d2 * half,
            &k.d3 * half,
        ])?);
        let e2 = SuperOp::from_kraus(&KrausSet::new(vec![k.k2.clone()])?);
        let e3 = SuperOp::measure_prepare(
            DIM,
            &[
                (0, k.rho_a.op().matrix().clone()),
                (1, k.rho_b.op().matrix().clone()),
            ],
        );
        let e4 = gamma4(&params, 1.0);
        let e21 = compose(&e2, &e1)?;
        let e321 = compose(&e3, &e21)?;
        let signs = k.dephasing_signs();
        let dephasing = SuperOp::from_fn(DIM, |x| {
            signs.iter().fold(x * cr(-3.0), |acc, d| acc + *d * x * *d)
        });
        Ok(Self {
            params,
            constants: k,
            e: [e1, e2, e3, e4],
            e21,
            e321,
            dephasing,
        })
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn constants(&self) -> &ConstantsTable {
        &self.constants
    }

    /// `E_i` for `i ∈ 1..=4`.
    pub fn make_e(&self, i: usize) -> Result<&SuperOp> {
        match i {
            1..=4 => Ok(&self.e[i - 1]),
            _ => Err(out_of_range("E index", i as f64, "1..=4")),
        }
    }

    /// `E2 E1`.
    pub fn e21(&self) -> &SuperOp {
        &self.e21
    }

    /// `E3 E2 E1`.
    pub fn e321(&self) -> &SuperOp {
        &self.e321
    }

    /// `L0(X) = Σ D_i X D_i - 3X`.
    pub fn dephasing_generator(&self) -> &SuperOp {
        &self.dephasing
    }

    /// `L_s = γ(s) L0`, defined for `s ∈ [0, 1)`.
    pub fn generator(&self, s: f64) -> Result<SuperOp> {
        if !(0.0..1.0).contains(&s) {
            return Err(out_of_range("s", s, "[0, 1)"));
        }
        Ok(&self.dephasing * self.params.gamma_rate.gamma(s))
    }

    /// `Γ^{(i)}_τ` for `i ∈ 1..=4`, `τ ∈ [0, 1]`.
    pub fn gamma_family(&self, i: usize, tau: f64) -> Result<SuperOp> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(out_of_range("tau", tau, "[0, 1]"));
        }
        match i {
            1 => Ok(self.gamma1(tau)),
            2 => Ok(self.mix(1.0 - (-self.params.f1.exponent(tau)).exp(), 2)),
            3 => Ok(self.mix(1.0 - (-self.params.f2.exponent(tau)).exp(), 3)),
            4 => Ok(gamma4(&self.params, tau)),
            _ => Err(out_of_range("Gamma index", i as f64, "1..=4")),
        }
    }

    /// Dephasing with off-diagonal coefficient `e^{-4 g(τ)}`; exactly `E1` at `τ = 1`.
    fn gamma1(&self, tau: f64) -> SuperOp {
        let decay = if tau >= 1.0 {
            0.0
        } else {
            (-4.0 * self.params.gamma_rate.gamma_integral(tau)).exp()
        };
        let mut m = CMat::identity(DIM * DIM, DIM * DIM) * cr(decay);
        for j in 0..DIM {
            m[(j * DIM + j, j * DIM + j)] = cr(1.0);
        }
        SuperOp::new(DIM, m).expect("square")
    }

    /// `(1 - w) Id + w E_k`.
    fn mix(&self, w: f64, k: usize) -> SuperOp {
        let id = SuperOp::identity(DIM);
        &(&id * (1.0 - w)) + &(&self.e[k - 1] * w)
    }

    /// Segment index (1..=4) and local time `τ` of `t`.
    pub fn segment(&self, t: f64) -> Result<(usize, f64)> {
        let [t1, t2, t3, t4] = self.params.boundaries();
        if !(0.0..=t4).contains(&t) {
            return Err(out_of_range("t", t, format!("[0, {t4}]")));
        }
        Ok(if t < t1 {
            (1, t / t1)
        } else if t < t2 {
            (2, (t - t1) / (t2 - t1))
        } else if t < t3 {
            (3, (t - t2) / (t3 - t2))
        } else {
            (4, ((t - t3) / (t4 - t3)).min(1.0))
        })
    }

    pub fn lambda_t(&self, t: f64) -> Result<SuperOp> {
        let (seg, tau) = self.segment(t)?;
        let gamma = self.gamma_family(seg, tau)?;
        match seg {
            1 => Ok(gamma),
            2 => compose(&gamma, &self.e[0]),
            3 => compose(&gamma, &self.e21),
            _ => compose(&gamma, &self.e321),
        }
    }
}

/// `Γ⁴_τ(X) = (1+w)[x11 |1><1| + x22 |α><α|] + (1-w)(x11+x22)|3><3|`
/// with `w = τ²`, `α = θ τ^δ` (rotation smoothing) or `w = τ^{2δ}` (full).
fn gamma4(p: &MapParams, tau: f64) -> SuperOp {
    let s = tau.powf(p.delta);
    let w = match p.smoothing {
        Smoothing::Rotation => tau * tau,
        Smoothing::Full => s * s,
    };
    let phi = rotated_ket(p.theta * s);
    let e11 = crate::linalg::matrix_unit(DIM, 0, 0);
    let e33 = crate::linalg::matrix_unit(DIM, 2, 2);
    let pphi = &phi * phi.adjoint();
    let tail = &e33 * cr(1.0 - w);
    SuperOp::measure_prepare(
        DIM,
        &[
            (0, e11 * cr(1.0 + w) + &tail),
            (1, pphi * cr(1.0 + w) + &tail),
        ],
    )
}

impl DynamicalFamily for Counterexample {
    fn dim(&self) -> usize {
        DIM
    }

    fn horizon(&self) -> f64 {
        self.params.t4
    }

    fn map_at(&self, t: f64) -> Result<SuperOp> {
        self.lambda_t(t)
    }

    fn parameters(&self) -> BTreeMap<String, f64> {
        let p = &self.params;
        [
            ("theta", p.theta),
            ("t1", p.t1),
            ("t2", p.t2),
            ("t3", p.t3),
            ("t4", p.t4),
            ("delta", p.delta),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

impl TryFrom<MapParams> for Counterexample {
    type Error = Error;
    fn try_from(p: MapParams) -> Result<Self> {
        Self::new(p)
    }
}
