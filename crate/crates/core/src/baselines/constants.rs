//! Limiting constants of the uncolored problems with i.i.d. uniform costs.

use crate::error::{Error, Result};

/// `zeta(3) = sum 1/k^3`, the limit of the expected uniform-cost MST.
pub fn zeta3() -> f64 {
    const N: usize = 2000;
    // sum largest-index terms first for accuracy
    let head: f64 = (1..=N).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
    let n = N as f64;
    // Euler-Maclaurin tail for sum_{k > N} k^-3
    head + 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n.powi(3)) + 1.0 / (4.0 * n.powi(4))
}

/// `ln((1 + y/2) e^{-y})`
fn log_g(y: f64) -> f64 {
    (y / 2.0).ln_1p() - y
}

/// `1 - (1 + x/2) e^{-x}`, without cancellation for small `x`.
fn one_minus_g(x: f64) -> f64 {
    -(-x).exp_m1() - 0.5 * x * (-x).exp()
}

/// Solves `(1 + y/2) e^{-y} = v` for `y >= 0`, `0 < v <= 1`.
fn solve_g(v: f64, x: f64) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::Numeric {
            x,
            msg: format!("target {v} outside (0, 1]"),
        });
    }
    let target = v.ln();
    // log_g is strictly decreasing from 0 at y = 0
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while log_g(hi) > target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Numeric {
                x,
                msg: "failed to bracket root".into(),
            });
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = log_g(y) - target;
        if f > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let slope = -(1.0 + y) / (2.0 + y);
        let mut next = y - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * (1.0 + y) || hi - lo <= 1e-15 * (1.0 + y) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::Numeric {
        x,
        msg: "root iteration did not converge".into(),
    })
}

/// The positive solution `y(x)` of `(1+x/2)e^{-x} + (1+y/2)e^{-y} = 1`.
/// Returns `+inf` at `x = 0`, where the curve has a vertical asymptote.
pub fn wastlund_y(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Numeric {
            x,
            msg: "x must be non-negative".into(),
        });
    }
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let v = one_minus_g(x);
    if v >= 1.0 {
        // 1 - g(x) reaches 1 only in the limit; y is below resolution
        return Ok(0.0);
    }
    solve_g(v, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WastlundEstimate {
    /// `tau = 1/2 * integral_0^inf y(x) dx`
    pub value: f64,
    /// Change in `value` when the quadrature step is halved.
    pub step_halving_delta: f64,
    /// Fixed point `y(a) = a` of the curve.
    pub fixed_point: f64,
}

/// Truncation of the `s` axis, where `x = a e^{-s}`; the neglected tail is
/// below `a (S + 2) e^{-S}`, about `1e-16` for `S = 42`.
const S_MAX: f64 = 42.0;

/// Composite Simpson estimate of tau with `steps` panels.
///
/// The curve is symmetric under `x <-> y`, so with the fixed point `a`
/// (`y(a) = a`) the area under it is `2 * int_0^a y dx - a^2`. The log
/// singularity at `x = 0` is removed by `x = a e^{-s}`, giving the smooth
/// integrand `y(a e^{-s}) a e^{-s}` on `[0, S_MAX]`.
pub fn wastlund_tau_with_steps(steps: usize) -> Result<f64> {
    let steps = steps.max(2) & !1;
    let a = solve_g(0.5, 0.0)?;
    let f = |s: f64| -> Result<f64> {
        let x = a * (-s).exp();
        Ok(wastlund_y(x)? * x)
    };
    let h = S_MAX / steps as f64;
    let mut acc = f(0.0)? + f(S_MAX)?;
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h)?;
    }
    let half_area = acc * h / 3.0;
    Ok(half_area - 0.5 * a * a)
}

/// Numeric value of the constant tau, with its step-halving self-check.
pub fn wastlund_constant() -> Result<WastlundEstimate> {
    const STEPS: usize = 4096;
    let coarse = wastlund_tau_with_steps(STEPS)?;
    let fine = wastlund_tau_with_steps(2 * STEPS)?;
    Ok(WastlundEstimate {
        value: fine,
        step_halving_delta: (fine - coarse).abs(),
        fixed_point: solve_g(0.5, 0.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_series() {
        let direct: f64 = (1..=200_000u64).map(|k| 1.0 / (k as f64).powi(3)).sum();
        assert!((zeta3() - direct).abs() < 2e-11);
        assert!((zeta3() - 1.2021).abs() < 1e-4);
    }

    #[test]
    fn curve_endpoints() {
        assert_eq!(wastlund_y(0.0).unwrap(), f64::INFINITY);
        assert!(wastlund_y(1e-12).unwrap() > 25.0);
        assert!(wastlund_y(40.0).unwrap() < 1e-6);
        assert!(wastlund_y(-1.0).is_err());
    }

    #[test]
    fn curve_satisfies_equation_and_symmetry() {
        let g = |t: f64| (1.0 + t / 2.0) * (-t).exp();
        for &x in &[1e-6, 0.01, 0.3, 1.0, 2.5, 7.0] {
            let y = wastlund_y(x).unwrap();
            assert!((g(x) + g(y) - 1.0).abs() < 1e-13, "x = {x}");
            let back = wastlund_y(y).unwrap();
            assert!((back - x).abs() < 1e-9 * (1.0 + x), "x = {x} back = {back}");
        }
    }

    #[test]
    fn tau_is_stable_under_step_halving() {
        let est = wastlund_constant().unwrap();
        assert!(est.step_halving_delta < 1e-10);
        let coarse = wastlund_tau_with_steps(256).unwrap();
        let fine = wastlund_tau_with_steps(512).unwrap();
        assert!((coarse - fine).abs() < 1e-4);
    }
}
