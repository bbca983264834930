//! Hermitian operators on a finite-dimensional Hilbert space.
//!
//! [`HermOp`] is the workhorse value type: every map in the crate consumes and
//! produces them. Construction validates Hermiticity once, after which the
//! stored matrix is exactly Hermitian (the tiny anti-Hermitian part admitted
//! by the tolerance is projected away).

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, CMat, CVec};
use crate::tol::{TOL_HERM, TOL_PSD, TOL_TRACE};

#[derive(Clone, Debug, PartialEq)]
pub struct HermOp {
    m: CMat,
}

impl HermOp {
    /// Validates `m` against the absolute Hermiticity tolerance.
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tolerance(m, TOL_HERM)
    }

    pub fn with_tolerance(m: CMat, tol: f64) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::InvalidOperand("operator of dimension 0".into()));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidOperand(format!(
                "operator is not square: {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&m);
        if !(defect <= tol) {
            return Err(Error::InvalidOperand(format!(
                "operator is not Hermitian (defect {defect:.3e} > {tol:.1e})"
            )));
        }
        Ok(Self::from_hermitized(&m))
    }

    pub(crate) fn from_hermitized(m: &CMat) -> Self {
        Self {
            m: linalg::hermitize(m),
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self { m: CMat::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            m: CMat::identity(d, d),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self {
            m: linalg::real_diagonal(diag),
        }
    }

    /// `|v><v|` for an arbitrary (not necessarily normalised) vector.
    pub fn projector(v: &CVec) -> Self {
        Self::from_hermitized(&(v * v.adjoint()))
    }

    /// `|i><i|` in dimension `d` (zero-based `i`).
    pub fn basis_projector(d: usize, i: usize) -> Self {
        Self {
            m: linalg::matrix_unit(d, i, i),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `Tr(X^2)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `U X U^†`.
    pub fn conjugate_by(&self, u: &CMat) -> Self {
        Self::from_hermitized(&(u * &self.m * u.adjoint()))
    }

    /// Projector onto the eigenspace with eigenvalues above `cutoff`.
    pub fn support_projector(&self, cutoff: f64) -> CMat {
        let (vals, vecs) = linalg::hermitian_eigen(&self.m);
        let d = self.dim();
        let mut p = CMat::zeros(d, d);
        for (k, &v) in vals.iter().enumerate() {
            if v > cutoff {
                let col = vecs.column(k);
                p += col * col.adjoint();
            }
        }
        p
    }

    pub fn max_abs_diff(&self, other: &HermOp) -> f64 {
        linalg::max_abs_diff(&self.m, &other.m)
    }
}

impl Add for &HermOp {
    type Output = HermOp;
    fn add(self, rhs: &HermOp) -> HermOp {
        HermOp { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermOp {
    type Output = HermOp;
    fn sub(self, rhs: &HermOp) -> HermOp {
        HermOp { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermOp {
    type Output = HermOp;
    fn mul(self, rhs: f64) -> HermOp {
        HermOp { m: &self.m * cr(rhs) }
    }
}

impl Neg for &HermOp {
    type Output = HermOp;
    fn neg(self) -> HermOp {
        HermOp { m: -&self.m }
    }
}

/// A unit-trace positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOp {
    base: HermOp,
}

impl DensityOp {
    pub fn new(base: HermOp) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > TOL_TRACE {
            return Err(Error::InvalidOperand(format!("density operator has trace {tr}")));
        }
        let min = base.min_eigenvalue();
        if min < -TOL_PSD {
            return Err(Error::InvalidOperand(format!(
                "density operator has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { base })
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn pure(v: &CVec) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidOperand("zero state vector".into()));
        }
        Self::new(HermOp::projector(&(v / cr(n))))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            base: &HermOp::identity(d) * (1.0 / d as f64),
        }
    }

    pub fn op(&self) -> &HermOp {
        &self.base
    }

    pub fn into_op(self) -> HermOp {
        self.base
    }
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(x: &HermOp) -> f64 {
    x.eigenvalues().iter().map(|v| v.abs()).sum()
}

/// Trace norm of a raw matrix, validating Hermiticity first.
pub fn trace_norm_matrix(m: &CMat) -> Result<f64> {
    Ok(trace_norm(&HermOp::new(m.clone())?))
}

/// Kronecker product; `dim = dim(a) * dim(b)`.
pub fn tensor(a: &HermOp, b: &HermOp) -> HermOp {
    HermOp {
        m: linalg::kron(&a.m, &b.m),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of an operator on `C^da ⊗ C^db`, keeping the chosen factor.
pub fn partial_trace(x: &HermOp, dims: (usize, usize), keep: Keep) -> Result<HermOp> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != x.dim() {
        return Err(Error::InvalidOperand(format!(
            "cannot split dimension {} as {da}x{db}",
            x.dim()
        )));
    }
    let m = &x.m;
    let out = match keep {
        Keep::First => CMat::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Keep::Second => CMat::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    };
    Ok(HermOp { m: out })
}

pub(crate) fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Gaussian-Hermitian draw `(A + A^†) / 2` from a Ginibre matrix.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermOp {
    let a = ginibre(d, d, rng);
    HermOp::from_hermitized(&a)
}

/// Normalised complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let g = ginibre(d, 1, rng);
    let v = CVec::from_column_slice(g.as_slice());
    let n = v.norm();
    v / cr(n)
}

/// Full-rank mixed state `G G^† / Tr(G G^†)`.
pub fn random_mixed_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOp {
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOp {
        base: HermOp::from_hermitized(&(m / cr(tr))),
    }
}

/// Unitary `exp(-i H)` for a Gaussian-Hermitian `H`.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let h = random_hermitian(d, rng).into_matrix();
    (h * c(0.0, -1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_norm_of_signed_diagonal() {
        assert_eq!(trace_norm(&HermOp::from_real_diagonal(&[1.0, -1.0, 0.0])), 2.0);
        assert!((trace_norm(&HermOp::identity(3)) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut m = CMat::identity(2, 2);
        m[(0, 1)] = cr(1e-6);
        assert!(matches!(HermOp::new(m.clone()), Err(Error::InvalidOperand(_))));
        assert!(trace_norm_matrix(&m).is_err());
        assert!(HermOp::new(CMat::zeros(2, 3)).is_err());
        assert!(HermOp::new(CMat::zeros(0, 0)).is_err());
    }

    #[test]
    fn tensor_of_identities_and_diagonals() {
        let i6 = tensor(&HermOp::identity(2), &HermOp::identity(3));
        assert_eq!(i6, HermOp::identity(6));
        let t = tensor(
            &HermOp::from_real_diagonal(&[1.0, -1.0]),
            &HermOp::from_real_diagonal(&[1.0, 0.0]),
        );
        assert_eq!(t, HermOp::from_real_diagonal(&[1.0, 0.0, -1.0, 0.0]));
    }

    #[test]
    fn partial_trace_of_identity_and_products() {
        let pt = partial_trace(&HermOp::identity(9), (3, 3), Keep::First).unwrap();
        assert!(pt.max_abs_diff(&(&HermOp::identity(3) * 3.0)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_mixed_state(3, &mut rng).into_op();
        let sigma = random_hermitian(2, &mut rng);
        let prod = tensor(&rho, &sigma);
        // direct contraction: sum_k rho_ij sigma_kk
        let expected = &rho * sigma.trace();
        let kept = partial_trace(&prod, (3, 2), Keep::First).unwrap();
        assert!(kept.max_abs_diff(&expected) < 1e-12);
        let other = partial_trace(&prod, (3, 2), Keep::Second).unwrap();
        assert!(other.max_abs_diff(&(&sigma * rho.trace())) < 1e-12);
        assert!((kept.trace() - prod.trace()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        assert!(partial_trace(&HermOp::identity(6), (4, 2), Keep::First).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOp::new(HermOp::identity(2)).is_err());
        assert!(DensityOp::new(HermOp::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityOp::new(HermOp::from_real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityOp::pure(&CVec::zeros(2)).is_err());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(4, &mut rng);
        let err = linalg::max_abs_diff(&(&u * u.adjoint()), &CMat::identity(4, 4));
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn support_projector_of_rho_like_state() {
        let rho = HermOp::from_real_diagonal(&[0.5, 0.0, 0.5]);
        let p = rho.support_projector(1e-8);
        assert!(linalg::max_abs_diff(&p, &linalg::real_diagonal(&[1.0, 0.0, 1.0])) < 1e-14);
    }
}
