//! Intermediate maps `Λ_{t,s}` with `Λ_t = Λ_{t,s} Λ_s`, CP-divisibility
//! verdicts on a grid, and the pure-target forcing witness against
//! P-divisibility.
//!
//! When `Λ_s` is singular, `Λ_{t,s}` is fixed only on `Im(Λ_s)`. The map
//! returned here is the minimum-norm (pseudoinverse) completion; verdicts
//! that would depend on the completion are reported as undefined unless the
//! forcing witness settles them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::DynamicalFamily;
use crate::linalg::{self, CMat, CVec};
use crate::operator::{trace_norm, DensityOp, HermOp};
use crate::superop::SuperOp;
use crate::tol::{TOL_DISCREPANCY, TOL_PSD, TOL_RESIDUAL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definedness {
    /// `Λ_s` invertible; `V` is unique.
    Exact,
    /// `V Λ_s = Λ_t` holds but `V` is fixed only on `Im(Λ_s)`.
    ImageRestricted,
    /// No linear `V` solves `V Λ_s = Λ_t`.
    Inconsistent,
}

#[derive(Clone, Debug)]
pub struct IntermediateMap {
    pub s: f64,
    pub t: f64,
    pub map: SuperOp,
    /// `max |V Λ_s - Λ_t|` over matrix entries.
    pub residual: f64,
    pub definedness: Definedness,
}

/// `V = Λ_t pinv(Λ_s)` with relative singular-value cutoff `tol`.
pub fn intermediate_map<F: DynamicalFamily + ?Sized>(
    family: &F,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<IntermediateMap> {
    if !(s < t) {
        return Err(Error::InvalidParams(format!("need s < t, got s = {s}, t = {t}")));
    }
    let ls = family.map_at(s)?;
    let lt = family.map_at(t)?;
    let (pinv, rank) = linalg::pseudo_inverse(ls.matrix(), tol);
    let v = lt.matrix() * pinv;
    let residual = linalg::max_abs_diff(&(&v * ls.matrix()), lt.matrix());
    let d = family.dim();
    let definedness = if residual >= TOL_RESIDUAL {
        Definedness::Inconsistent
    } else if rank == d * d {
        Definedness::Exact
    } else {
        Definedness::ImageRestricted
    };
    Ok(IntermediateMap {
        s,
        t,
        map: SuperOp::new(d, v)?,
        residual,
        definedness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisibilityVerdict {
    Cp,
    NotCp,
    UndefinedOffImage,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityRow {
    pub s: f64,
    pub t: f64,
    pub definedness: Definedness,
    pub residual: f64,
    /// Smallest Choi eigenvalue of the (completed) intermediate map.
    pub min_choi_eig: f64,
    /// Forcing-witness discrepancy, when a forcing configuration exists.
    pub discrepancy: Option<f64>,
    pub verdict: DivisibilityVerdict,
}

/// Verdict for one interval.
///
/// * exact, Choi PSD: CP.
/// * exact, Choi not PSD: not CP.
/// * image-restricted with a CP completion: CP.
/// * image-restricted otherwise: not CP if the forcing witness certifies that
///   no positive TP extension exists, undefined off the image otherwise.
/// * inconsistent: undefined.
pub fn divisibility_row<F: DynamicalFamily + ?Sized>(
    family: &F,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<DivisibilityRow> {
    let im = intermediate_map(family, s, t, tol)?;
    let min_choi_eig = im.map.to_choi().min_eigenvalue();
    let choi_ok = min_choi_eig >= -TOL_PSD;
    let mut discrepancy = None;
    let verdict = match im.definedness {
        Definedness::Exact if choi_ok => DivisibilityVerdict::Cp,
        Definedness::Exact => DivisibilityVerdict::NotCp,
        Definedness::ImageRestricted if choi_ok => DivisibilityVerdict::Cp,
        Definedness::ImageRestricted => {
            discrepancy = positive_forcing_witness(family, s, t, tol)?.map(|w| w.discrepancy);
            if discrepancy.is_some_and(|d| d > TOL_DISCREPANCY) {
                DivisibilityVerdict::NotCp
            } else {
                DivisibilityVerdict::UndefinedOffImage
            }
        }
        Definedness::Inconsistent => DivisibilityVerdict::UndefinedOffImage,
    };
    Ok(DivisibilityRow {
        s,
        t,
        definedness: im.definedness,
        residual: im.residual,
        min_choi_eig,
        discrepancy,
        verdict,
    })
}

/// One row per consecutive pair of an ascending `grid`.
pub fn cp_divisibility_scan<F: DynamicalFamily + ?Sized>(
    family: &F,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<DivisibilityRow>> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("grid must be strictly ascending".into()));
    }
    grid.par_windows(2)
        .map(|w| divisibility_row(family, w[0], w[1], tol))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ForcingWitness {
    /// Unit vector in the supports of both `σ_i` and `σ_j`, phase fixed so
    /// its largest component is real and positive.
    pub shared_vector: CVec,
    /// Normalised `Λ_t` images of inputs `i` and `j`; both pure.
    pub forced_targets: (DensityOp, DensityOp),
    /// `‖π_i - π_j‖₁`.
    pub discrepancy: f64,
    /// Indices `(i, j)` into the input basis.
    pub inputs: (usize, usize),
}

impl ForcingWitness {
    /// Whether the witness rules out every positive TP intermediate map.
    pub fn certifies(&self) -> bool {
        self.discrepancy > TOL_DISCREPANCY
    }
}

/// Forcing witness on the computational basis inputs `|j><j|`.
pub fn positive_forcing_witness<F: DynamicalFamily + ?Sized>(
    family: &F,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<Option<ForcingWitness>> {
    let d = family.dim();
    positive_forcing_witness_in_basis(family, s, t, tol, &CMat::identity(d, d))
}

/// Forcing witness on inputs `|b_j><b_j|` for the columns `b_j` of `basis`.
///
/// If a positive TP map `V` sends a state `σ` to a pure state `π`, it sends
/// every state supported inside `supp(σ)` to `π`. Two inputs whose `Λ_s`
/// images share a support vector but whose `Λ_t` images are different pure
/// states therefore admit no such `V`. Among all such pairs the one with the
/// largest discrepancy is returned; `None` means no pair has pure targets and
/// overlapping supports.
pub fn positive_forcing_witness_in_basis<F: DynamicalFamily + ?Sized>(
    family: &F,
    s: f64,
    t: f64,
    tol: f64,
    basis: &CMat,
) -> Result<Option<ForcingWitness>> {
    let d = family.dim();
    if basis.nrows() != d || basis.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis.nrows(),
        });
    }
    let ls = family.map_at(s)?;
    let lt = family.map_at(t)?;

    struct Slot {
        support: CMat,
        target: HermOp,
    }
    let mut slots: Vec<Option<Slot>> = Vec::with_capacity(d);
    for j in 0..d {
        let p = HermOp::projector(&basis.column(j).into_owned());
        let sigma = ls.apply(&p)?;
        let pi = lt.apply(&p)?;
        let (ts, tt) = (sigma.trace(), pi.trace());
        if ts <= tol || tt <= tol {
            slots.push(None);
            continue;
        }
        let target = &pi * (1.0 / tt);
        if target.purity() <= 1.0 - tol {
            slots.push(None);
            continue;
        }
        slots.push(Some(Slot {
            support: (&sigma * (1.0 / ts)).support_projector(tol),
            target,
        }));
    }

    let mut best: Option<ForcingWitness> = None;
    for i in 0..d {
        for j in i + 1..d {
            let (Some(a), Some(b)) = (&slots[i], &slots[j]) else {
                continue;
            };
            let Some(v) = support_intersection(&a.support, &b.support, tol) else {
                continue;
            };
            let discrepancy = trace_norm(&(&a.target - &b.target));
            if best.as_ref().is_some_and(|w| w.discrepancy >= discrepancy) {
                continue;
            }
            best = Some(ForcingWitness {
                shared_vector: v,
                forced_targets: (DensityOp::new(a.target.clone())?, DensityOp::new(b.target.clone())?),
                discrepancy,
                inputs: (i, j),
            });
        }
    }
    Ok(best)
}

/// A unit vector in `ran(P1) ∩ ran(P2)`: kernel of `(1 - P1) + (1 - P2)`.
fn support_intersection(p1: &CMat, p2: &CMat, cutoff: f64) -> Option<CVec> {
    let d = p1.nrows();
    let id = CMat::identity(d, d);
    let m = (&id - p1) + (&id - p2);
    let (vals, vecs) = linalg::hermitian_eigen(&m);
    if vals[0] >= cutoff {
        return None;
    }
    let mut v: CVec = vecs.column(0).into_owned();
    let k = (0..d)
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .expect("nonempty");
    let phase = v[k].conj() / v[k].norm();
    v *= phase;
    v[k] = linalg::cr(v[k].re);
    Some(v)
}
