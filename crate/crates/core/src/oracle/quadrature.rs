//! Tanh-sinh quadrature, the fallback for integrands that are not power series
//! at zero.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::oracle::summation::{Estimate, SumMethod};

const MAX_LEVEL: u32 = 12;
const T_MAX: f64 = 4.0;

/// `∫_a^b f(x) dx`, halving the step until two successive levels agree to
/// `tol`. Nodes that round onto an endpoint are skipped.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut evaluations = 0usize;
    let mut node = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint, without cancellation
        let gap = 2.0 * d / (1.0 + (2.0 * u.abs()).exp());
        let x = if t < 0.0 { a + gap } else if t > 0.0 { b - gap } else { c };
        if x <= a || x >= b {
            return 0.0;
        }
        let w = d * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if w == 0.0 {
            return 0.0;
        }
        evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        sum += node(k as f64 * h) + node(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            sum += node(k as f64 * h) + node(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= tol {
            break;
        }
    }
    Estimate {
        value: estimate,
        error,
        terms: evaluations,
        method: SumMethod::Quadrature,
    }
    .require(tol)
}

/// `∫_eps^(1-eps) (x^n - 1) f(x) dx`, the regularized Mellin transform with
/// both endpoints cut off.
pub fn regularized_mellin_quadrature(
    f: impl Fn(f64) -> f64,
    n: u32,
    eps: f64,
    tol: f64,
) -> Result<Estimate> {
    tanh_sinh(|x| (x.powi(n as i32) - 1.0) * f(x), eps, 1.0 - eps, tol)
}

/// `∫_eps^(1-eps) x^n f(x) dx`.
pub fn mellin_quadrature(f: impl Fn(f64) -> f64, n: u32, eps: f64, tol: f64) -> Result<Estimate> {
    tanh_sinh(|x| x.powi(n as i32) * f(x), eps, 1.0 - eps, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_endpoint_singularity() {
        let e = tanh_sinh(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((e.value - 1.0 / 3.0).abs() < 1e-12);
        let e = tanh_sinh(|x| x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert!((e.value + 1.0).abs() < 1e-10);
        let e = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-8).unwrap();
        assert!((e.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn regularized_constant() {
        let e = regularized_mellin_quadrature(|_| 1.0, 3, 0.0, 1e-12).unwrap();
        assert!((e.value + 0.75).abs() < 1e-12);
    }
}
