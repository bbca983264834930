//! Linear maps on operators in the column-stacking representation.
//!
//! A [`SuperOp`] on a `d`-dimensional system is a `d² × d²` matrix acting on
//! `vec(X)`, where `vec(|i><j|)` sits at index `j·d + i`. In this convention
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`, so a Kraus map `X ↦ Σ K X K†` is
//! `Σ conj(K) ⊗ K`.
//!
//! The Choi matrix is unnormalised, `C = Σ_ij S(|i><j|) ⊗ |i><j|`, output
//! factor first. A map is CP iff `C ⪰ 0` and TP iff tracing out the output
//! factor leaves the identity.

use std::ops::{Add, Mul, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::DynamicalFamily;
use crate::linalg::{self, cr, CMat};
use crate::operator::{partial_trace, random_pure_state, DensityOp, HermOp, Keep};
use crate::tol::{TOL_HERM_APPLY, TOL_PSD};

#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    dim: usize,
    matrix: CMat,
}

impl SuperOp {
    pub fn new(dim: usize, matrix: CMat) -> Result<Self> {
        let n = dim * dim;
        if dim == 0 || matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidOperand(format!(
                "superoperator on dimension {dim} needs a {n}x{n} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMat::identity(dim * dim, dim * dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMat::zeros(dim * dim, dim * dim),
        }
    }

    /// Builds the matrix by applying `f` to every matrix unit `|i><j|`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(&CMat) -> CMat) -> Self {
        let n = dim * dim;
        let mut matrix = CMat::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let out = linalg::vectorize(&f(&linalg::matrix_unit(dim, i, j)));
                matrix.set_column(j * dim + i, &out);
            }
        }
        Self { dim, matrix }
    }

    /// `X ↦ Σ_m <k_m|X|k_m> B_m` for basis kets `|k_m>` (zero-based indices).
    pub fn measure_prepare(dim: usize, branches: &[(usize, CMat)]) -> Self {
        let n = dim * dim;
        let mut matrix = CMat::zeros(n, n);
        for (k, out) in branches {
            let col = k * dim + k;
            let v = linalg::vectorize(out);
            for r in 0..n {
                matrix[(r, col)] += v[r];
            }
        }
        Self { dim, matrix }
    }

    /// The transposition map `X ↦ Xᵀ`: positive but not completely positive.
    pub fn transposition(dim: usize) -> Self {
        Self::from_fn(dim, |x| x.transpose())
    }

    pub fn from_kraus(kraus: &KrausSet) -> Self {
        let d = kraus.dim();
        let n = d * d;
        let mut matrix = CMat::zeros(n, n);
        for k in &kraus.operators {
            matrix += linalg::kron(&k.map(|z| z.conj()), k);
        }
        Self { dim: d, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Applies the map to an arbitrary (possibly non-Hermitian) matrix.
    pub fn apply_matrix(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.nrows(),
            });
        }
        let v = &self.matrix * linalg::vectorize(x);
        Ok(linalg::unvectorize(&v, self.dim))
    }

    /// Applies the map to a Hermitian operator; fails if the output is not Hermitian.
    pub fn apply(&self, x: &HermOp) -> Result<HermOp> {
        let out = self.apply_matrix(x.matrix())?;
        hermitian_output(out)
    }

    /// `(S ⊗ 1_k)(X)` for `X` on `C^d ⊗ C^k` (system factor first).
    pub fn apply_extended(&self, x: &HermOp, k: usize) -> Result<HermOp> {
        if k == 1 {
            return self.apply(x);
        }
        let d = self.dim;
        if k == 0 || x.dim() != d * k {
            return Err(Error::DimensionMismatch {
                expected: d * k,
                found: x.dim(),
            });
        }
        let xm = x.matrix();
        let mut out = CMat::zeros(d * k, d * k);
        for a in 0..k {
            for b in 0..k {
                let block = CMat::from_fn(d, d, |i, j| xm[(i * k + a, j * k + b)]);
                let img = self.apply_matrix(&block)?;
                for i in 0..d {
                    for j in 0..d {
                        out[(i * k + a, j * k + b)] = img[(i, j)];
                    }
                }
            }
        }
        hermitian_output(out)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &SuperOp) -> Result<SuperOp> {
        compose(self, first)
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let mut c = CMat::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                // column j*d+i of the matrix is vec(S(|i><j|))
                for p in 0..d {
                    for q in 0..d {
                        c[(p * d + i, q * d + j)] = self.matrix[(q * d + p, j * d + i)];
                    }
                }
            }
        }
        ChoiMatrix {
            dim: d,
            base: HermOp::from_hermitized(&c),
            hermiticity_defect: linalg::hermiticity_defect(&c),
        }
    }

    pub fn is_cp(&self, tol: f64) -> bool {
        self.to_choi().is_cp(tol)
    }

    pub fn is_tp(&self, tol: f64) -> bool {
        self.to_choi().is_tp(tol)
    }

    /// Minimum eigenvalue of `S(|ψ><ψ|)` over `n` seeded random pure states.
    ///
    /// A witness is returned only for a violation below `-TOL_PSD`, which
    /// certifies that the map is not positive. A clean sample is evidence, not proof.
    pub fn positivity_sample(&self, n: usize, seed: u64) -> Result<PositivitySample> {
        if n == 0 {
            return Err(Error::InvalidOperand("positivity sample needs n >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::INFINITY;
        let mut best_state = None;
        for _ in 0..n {
            let psi = random_pure_state(self.dim, &mut rng);
            let rho = HermOp::projector(&psi);
            let out = self.apply(&rho)?;
            let m = out.min_eigenvalue();
            if m < best {
                best = m;
                best_state = Some(psi);
            }
        }
        let witness = if best < -TOL_PSD {
            best_state.map(|psi| DensityOp::pure(&psi)).transpose()?
        } else {
            None
        };
        Ok(PositivitySample {
            min_eig: best,
            witness,
        })
    }

    /// Orthonormal basis of the image in vectorised operator space.
    pub fn image_basis(&self, rel_tol: f64) -> ImageBasis {
        let (basis, singular_values) = linalg::column_space(&self.matrix, rel_tol);
        ImageBasis {
            dim: self.dim,
            basis,
            singular_values,
        }
    }

    pub fn max_abs_diff(&self, other: &SuperOp) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

fn hermitian_output(out: CMat) -> Result<HermOp> {
    let scale = linalg::max_abs(&out).max(1.0);
    HermOp::with_tolerance(out, TOL_HERM_APPLY * scale)
}

/// `s2 ∘ s1`.
pub fn compose(s2: &SuperOp, s1: &SuperOp) -> Result<SuperOp> {
    if s2.dim != s1.dim {
        return Err(Error::DimensionMismatch {
            expected: s2.dim,
            found: s1.dim,
        });
    }
    Ok(SuperOp {
        dim: s1.dim,
        matrix: &s2.matrix * &s1.matrix,
    })
}

impl Add for &SuperOp {
    type Output = SuperOp;
    fn add(self, rhs: &SuperOp) -> SuperOp {
        assert_eq!(self.dim, rhs.dim, "superoperator dimensions differ");
        SuperOp {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &SuperOp {
    type Output = SuperOp;
    fn sub(self, rhs: &SuperOp) -> SuperOp {
        assert_eq!(self.dim, rhs.dim, "superoperator dimensions differ");
        SuperOp {
            dim: self.dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul<f64> for &SuperOp {
    type Output = SuperOp;
    fn mul(self, rhs: f64) -> SuperOp {
        SuperOp {
            dim: self.dim,
            matrix: &self.matrix * cr(rhs),
        }
    }
}

/// Square operators of a common dimension, inducing `X ↦ Σ K X K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMat>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMat>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidOperand("empty Kraus set".into()))?;
        let d = first.nrows();
        if d == 0 {
            return Err(Error::InvalidOperand("Kraus operator of dimension 0".into()));
        }
        for k in &operators {
            if k.nrows() != d || k.ncols() != d {
                return Err(Error::InvalidOperand(format!(
                    "Kraus operators must all be {d}x{d}, found {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        Ok(Self { operators })
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    /// Direct evaluation of `Σ K X K†`.
    pub fn apply_matrix(&self, x: &CMat) -> CMat {
        self.operators
            .iter()
            .fold(CMat::zeros(x.nrows(), x.ncols()), |acc, k| acc + k * x * k.adjoint())
    }
}

/// Unnormalised Choi matrix of a map on a `dim`-dimensional system.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    base: HermOp,
    hermiticity_defect: f64,
}

impl ChoiMatrix {
    pub fn op(&self) -> &HermOp {
        &self.base
    }

    /// Hermiticity defect of the raw Choi matrix before projection; nonzero
    /// beyond noise only for maps that do not preserve Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.base.min_eigenvalue()
    }

    pub fn is_cp(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.min_eigenvalue() >= -tol
    }

    /// Largest deviation of `Tr_out C` from the identity.
    pub fn tp_defect(&self) -> f64 {
        let reduced = partial_trace(&self.base, (self.dim, self.dim), Keep::Second)
            .expect("Choi matrix has product dimension");
        reduced.max_abs_diff(&HermOp::identity(self.dim))
    }

    pub fn is_tp(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.tp_defect() <= tol
    }
}

#[derive(Clone, Debug)]
pub struct PositivitySample {
    pub min_eig: f64,
    pub witness: Option<DensityOp>,
}

/// Orthonormal basis (columns, vectorised operators) of a map's image.
#[derive(Clone, Debug)]
pub struct ImageBasis {
    dim: usize,
    basis: CMat,
    singular_values: Vec<f64>,
}

impl ImageBasis {
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Norm of the component of `vec(x)` orthogonal to the image, relative to `‖x‖₂`.
    pub fn residual_of(&self, x: &CMat) -> f64 {
        let v = linalg::vectorize(x);
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (v - proj).norm() / n
    }

    /// Largest residual of `other`'s basis vectors after projection onto this
    /// image; zero iff `Im(other) ⊆ Im(self)`.
    pub fn inclusion_residual(&self, other: &ImageBasis) -> f64 {
        assert_eq!(self.dim, other.dim, "image bases on different systems");
        if other.rank() == 0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * &other.basis);
        let diff = &other.basis - proj;
        diff.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct ImageInclusionReport {
    pub holds: bool,
    /// Largest inclusion residual over grid pairs `s < t`.
    pub worst_residual: f64,
    /// `(s, t)` attaining the worst residual.
    pub worst_pair: Option<(f64, f64)>,
    pub ranks: Vec<(f64, usize)>,
}

/// Checks `Im(Λ_t) ⊆ Im(Λ_s)` for every pair `s < t` of an ascending grid.
pub fn is_image_nonincreasing<F: DynamicalFamily + ?Sized>(
    family: &F,
    grid: &[f64],
    tol: f64,
) -> Result<ImageInclusionReport> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("grid must be strictly ascending".into()));
    }
    let images = grid
        .iter()
        .map(|&t| Ok((t, family.map_at(t)?.image_basis(tol))))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0;
    let mut worst_pair = None;
    for (i, (s, early)) in images.iter().enumerate() {
        for (t, late) in &images[i + 1..] {
            let r = early.inclusion_residual(late);
            if r > worst {
                worst = r;
                worst_pair = Some((*s, *t));
            }
        }
    }
    Ok(ImageInclusionReport {
        holds: worst < tol,
        worst_residual: worst,
        worst_pair,
        ranks: images.iter().map(|(t, b)| (*t, b.rank())).collect(),
    })
}
