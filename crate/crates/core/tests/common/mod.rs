//! Reference computations that share no code with the library's linear algebra.
#![allow(dead_code)]

use nonmarkov_core::{CMat, C64};

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of `m`
/// (Faddeev-LeVerrier), highest power first.
pub fn char_poly(m: &CMat) -> Vec<C64> {
    let n = m.nrows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut mk = CMat::zeros(n, n);
    let id = CMat::identity(n, n);
    for k in 1..=n {
        mk = m * (&mk + &id * coeffs[k - 1]);
        let ck = -mk.trace() / C64::new(k as f64, 0.0);
        coeffs.push(ck);
    }
    coeffs
}

/// All roots of a monic polynomial (Durand-Kerner iteration).
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |z: C64| coeffs.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Eigenvalues of a Hermitian matrix, ascending, via its characteristic polynomial.
pub fn eigenvalues_oracle(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = poly_roots(&char_poly(m)).iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn trace_norm_oracle(m: &CMat) -> f64 {
    eigenvalues_oracle(m).iter().map(|v| v.abs()).sum()
}

/// `exp(a)` by scaling and squaring a truncated Taylor series.
pub fn expm_taylor(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let scaled = a / C64::new(2f64.powi(squarings), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `Σ K X K†`.
pub fn kraus_sum(ops: &[CMat], x: &CMat) -> CMat {
    ops.iter()
        .fold(CMat::zeros(x.nrows(), x.ncols()), |acc, k| acc + k * x * k.adjoint())
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
