//! Fixed qutrit operators used by the construction.
//!
//! Kets are labelled `|1>, |2>, |3>` in the docs and stored at zero-based
//! indices 0, 1, 2.

use crate::linalg::{basis_ket, c, cr, real_diagonal, CMat, CVec};
use crate::operator::{DensityOp, HermOp};

pub const DIM: usize = 3;

#[derive(Clone, Debug)]
pub struct ConstantsTable {
    pub d1: CMat,
    pub d2: CMat,
    pub d3: CMat,
    pub k2: CMat,
    pub rho_a: DensityOp,
    pub rho_b: DensityOp,
    pub g: HermOp,
    pub kets: [CVec; 3],
}

impl ConstantsTable {
    pub fn new() -> Self {
        let k2 = CMat::from_row_slice(
            DIM,
            DIM,
            &[
                cr(1.0), cr(0.0), cr(0.0),
                cr(0.0), cr(1.0), cr(1.0),
                cr(0.0), cr(0.0), cr(0.0),
            ],
        );
        let g = CMat::from_row_slice(
            DIM,
            DIM,
            &[
                cr(0.0), c(0.0, -1.0), cr(0.0),
                c(0.0, 1.0), cr(0.0), cr(0.0),
                cr(0.0), cr(0.0), cr(0.0),
            ],
        );
        let density = |d: [f64; 3]| {
            DensityOp::new(HermOp::from_real_diagonal(&d)).expect("diagonal state")
        };
        Self {
            d1: real_diagonal(&[-1.0, 1.0, 1.0]),
            d2: real_diagonal(&[1.0, -1.0, 1.0]),
            d3: real_diagonal(&[1.0, 1.0, -1.0]),
            k2,
            rho_a: density([0.5, 0.0, 0.5]),
            rho_b: density([0.0, 0.5, 0.5]),
            g: HermOp::new(g).expect("G is Hermitian"),
            kets: [basis_ket(DIM, 0), basis_ket(DIM, 1), basis_ket(DIM, 2)],
        }
    }

    pub fn dephasing_signs(&self) -> [&CMat; 3] {
        [&self.d1, &self.d2, &self.d3]
    }
}

impl Default for ConstantsTable {
    fn default() -> Self {
        Self::new()
    }
}

/// `e^{iGα}`: a real rotation by `α` in the `{|1>, |2>}` plane, identity on `|3>`.
pub fn rotation(alpha: f64) -> CMat {
    let (s, co) = alpha.sin_cos();
    CMat::from_row_slice(
        DIM,
        DIM,
        &[
            cr(co), cr(s), cr(0.0),
            cr(-s), cr(co), cr(0.0),
            cr(0.0), cr(0.0), cr(1.0),
        ],
    )
}

/// `|α> = e^{iGα}|2> = sin α |1> + cos α |2>`.
pub fn rotated_ket(alpha: f64) -> CVec {
    let (s, co) = alpha.sin_cos();
    CVec::from_vec(vec![cr(s), cr(co), cr(0.0)])
}
