//! One-sided (right) derivative estimation.
//!
//! Forward differences `D(h) = (f(t+h) - f(t)) / h` at `h, h/2, h/4` are
//! combined by two Richardson steps, which removes the `O(h)` and `O(h^2)`
//! error terms. Trace-norm trajectories have kinks; a kink inside
//! `(t, t+h]` breaks the error model. That shows up as a ratio of
//! successive differences outside `[1, 8]`, and the estimate is retried
//! with a step eight times smaller. If every retry still straddles a kink, the
//! smallest plain forward difference is returned. For a nonincreasing `f`,
//! that difference is never positive.

use crate::tol::DEFAULT_STEP;

const RETRIES: usize = 3;

/// Abscissae evaluated for one Richardson attempt with step `h`.
pub fn richardson_nodes(t: f64, h: f64) -> [f64; 4] {
    [t, t + h, t + h / 2.0, t + h / 4.0]
}

fn extrapolate(d: &[f64; 3]) -> f64 {
    (8.0 * d[2] - 6.0 * d[1] + d[0]) / 3.0
}

fn consistent(d: &[f64; 3], f0: f64, h: f64) -> bool {
    let e1 = d[0] - d[1];
    let e2 = d[1] - d[2];
    let noise = 1e3 * f64::EPSILON * (1.0 + f0.abs()) / (h / 4.0);
    if e1.abs() <= noise && e2.abs() <= noise {
        return true;
    }
    if e2 == 0.0 {
        return false;
    }
    let ratio = e1 / e2;
    (1.0..=8.0).contains(&ratio)
}

/// Right derivative `lim_{h↓0} (f(t+h) - f(t)) / h` from steps `h0, h0/2, h0/4`.
///
/// `f` is evaluated only on `[t, t + h0]`; evaluation errors propagate.
pub fn right_derivative<F, E>(mut f: F, t: f64, h0: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(h0 > 0.0, "right_derivative needs a positive step, got {h0}");
    let f0 = f(t)?;
    let mut h = h0;
    let mut fallback = 0.0;
    for _ in 0..RETRIES {
        let [_, a, b, q] = richardson_nodes(t, h);
        let d = [(f(a)? - f0) / h, (f(b)? - f0) / (h / 2.0), (f(q)? - f0) / (h / 4.0)];
        if consistent(&d, f0, h) {
            return Ok(extrapolate(&d));
        }
        fallback = d[2];
        h /= 8.0;
    }
    Ok(fallback)
}

/// [`right_derivative`] with the default step.
pub fn right_derivative_default<F, E>(f: F, t: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    right_derivative(f, t, DEFAULT_STEP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64, Infallible> {
        move |x| Ok(f(x))
    }

    #[test]
    fn square_at_one() {
        let d = right_derivative_default(ok(|t| t * t), 1.0).unwrap();
        assert!((d - 2.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn absolute_value_at_zero_is_right_limit() {
        let d = right_derivative_default(ok(f64::abs), 0.0).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn kink_just_ahead_is_not_extrapolated_into_a_positive_value() {
        // nonincreasing, flat until t = 3e-5 then slope -1
        let f = |x: f64| -(x - 3e-5).max(0.0);
        let d = right_derivative(ok(f), 0.0, 1e-4).unwrap();
        assert!(d <= 0.0 && d.abs() < 1e-9, "{d}");
    }

    #[test]
    fn errors_propagate() {
        let r: Result<f64, &str> = right_derivative(|x| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.5, 1e-4);
        assert_eq!(r, Err("boom"));
    }

    #[test]
    #[should_panic]
    fn non_positive_step_panics() {
        let _ = right_derivative(ok(|t| t), 0.0, 0.0);
    }
}
