//! Summing truncated series with an error estimate.
//!
//! The shape of the last [`TAIL_WINDOW`] nonzero terms decides the method:
//!
//! * alternating signs: Euler means of the partial sums, which also assign
//!   the Abel value to alternating series with polynomially growing terms;
//! * one sign, ratio bounded below one: geometric tail bound;
//! * one sign, power-law decay `k^-p` with `p > 1`: integral tail estimate.
//!
//! Anything else is reported as divergent. The estimates are heuristic, not
//! rigorous enclosures.

use std::fmt;

use crate::error::{Error, Result};

/// Number of trailing nonzero terms inspected to classify a series.
pub const TAIL_WINDOW: usize = 16;

/// Maximum number of Euler levels.
const EULER_LEVELS: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMethod {
    Finite,
    Geometric,
    PowerLaw,
    Euler,
    Richardson,
    Quadrature,
}

impl fmt::Display for SumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumMethod::Finite => "finite",
            SumMethod::Geometric => "geometric-tail",
            SumMethod::PowerLaw => "power-law-tail",
            SumMethod::Euler => "euler",
            SumMethod::Richardson => "richardson",
            SumMethod::Quadrature => "tanh-sinh",
        })
    }
}

/// A value with an estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub terms: usize,
    pub method: SumMethod,
}

impl Estimate {
    pub fn require(self, tol: f64) -> Result<Self> {
        if self.error <= tol && self.value.is_finite() {
            Ok(self)
        } else {
            Err(Error::ToleranceNotReached {
                achieved: self.error,
                requested: tol,
                terms: self.terms,
            })
        }
    }
}

/// Sums `terms` (the first `terms.len()` terms of an infinite series) and
/// fails unless the error estimate is at most `tol`.
pub fn sum_series(terms: &[f64], tol: f64) -> Result<Estimate> {
    estimate_sum(terms)?.require(tol)
}

/// Like [`sum_series`] without the tolerance check.
pub fn estimate_sum(terms: &[f64]) -> Result<Estimate> {
    if terms.iter().any(|t| !t.is_finite()) {
        return Err(Error::OracleInapplicable("non-finite series term".into()));
    }
    let count = terms.len();
    let nonzero: Vec<(usize, f64)> = terms
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, t)| *t != 0.0)
        .collect();
    let trailing_zeros = match nonzero.last() {
        None => count,
        Some((i, _)) => count - 1 - i,
    };
    if trailing_zeros >= TAIL_WINDOW {
        return Ok(Estimate {
            value: nonzero.iter().map(|(_, t)| t).sum(),
            error: 0.0,
            terms: count,
            method: SumMethod::Finite,
        });
    }
    if nonzero.len() < TAIL_WINDOW {
        return Err(Error::ToleranceNotReached {
            achieved: f64::INFINITY,
            requested: 0.0,
            terms: count,
        });
    }
    let window = &nonzero[nonzero.len() - TAIL_WINDOW..];
    let alternating = window.windows(2).all(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0));
    if alternating {
        let values: Vec<f64> = nonzero.iter().map(|(_, t)| *t).collect();
        return Ok(euler_sum(&values, count));
    }
    one_signed_tail(&nonzero, window, count)
}

fn one_signed_tail(nonzero: &[(usize, f64)], window: &[(usize, f64)], count: usize) -> Result<Estimate> {
    let partial: f64 = nonzero.iter().map(|(_, t)| t).sum();
    let ratios: Vec<f64> = window.windows(2).map(|w| (w[1].1 / w[0].1).abs()).collect();
    let rho = ratios.iter().copied().fold(0.0, f64::max);
    let rho_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let (last_idx, last) = *window.last().expect("window is nonempty");
    let roundoff = f64::EPSILON * nonzero.iter().map(|(_, t)| t.abs()).sum::<f64>();

    if rho_min > 1.0 + 1e-9 {
        return Err(Error::OracleInapplicable(
            "terms grow geometrically (radius of convergence below one)".into(),
        ));
    }
    // k^-p has ratios near 1 - p/k; only a clearly smaller ratio counts as
    // geometric (power laws with p > 4 land here too, with a bound that is
    // at most a third too small, hence the safety factor)
    if rho < 1.0 - 4.0 / (last_idx + 1) as f64 {
        return Ok(Estimate {
            value: partial,
            error: 1.5 * last.abs() * rho / (1.0 - rho) + roundoff,
            terms: count,
            method: SumMethod::Geometric,
        });
    }
    // |t_k| ~ C k^-p, fitted on the first and last point of the window
    let (first_idx, first) = window[0];
    let k0 = (first_idx + 1) as f64;
    let k1 = (last_idx + 1) as f64;
    let p = -(last.abs().ln() - first.abs().ln()) / (k1.ln() - k0.ln());
    if !(p > 1.0 + 1e-3) {
        return Err(Error::OracleInapplicable(format!(
            "terms decay like k^-{p:.3}; the series diverges"
        )));
    }
    let tail = last.abs() * k1 / (p - 1.0);
    Ok(Estimate {
        value: partial + last.signum() * tail,
        error: tail + roundoff,
        terms: count,
        method: SumMethod::PowerLaw,
    })
}

/// Euler means `2^-l sum_i C(l, i) S_i` of the partial sums, computed by
/// repeated averaging. Tries the means from the first term and from the last
/// [`EULER_LEVELS`] terms (with the earlier ones summed directly) and keeps
/// whichever looks more converged.
fn euler_sum(values: &[f64], count: usize) -> Estimate {
    let head = euler_from(values, 0);
    if values.len() <= EULER_LEVELS {
        return Estimate { terms: count, ..head };
    }
    let tail = euler_from(values, values.len() - EULER_LEVELS);
    let best = if tail.error < head.error { tail } else { head };
    Estimate { terms: count, ..best }
}

fn euler_from(values: &[f64], start: usize) -> Estimate {
    let prefix: f64 = values[..start].iter().sum();
    let used = &values[start..values.len().min(start + EULER_LEVELS)];
    let mut level: Vec<f64> = Vec::with_capacity(used.len());
    let mut s = prefix;
    let mut scale = prefix.abs();
    for v in used {
        s += v;
        scale = scale.max(s.abs());
        level.push(s);
    }
    let mut means = vec![level[0]];
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = 0.5 * (level[i] + level[i + 1]);
        }
        level.pop();
        means.push(level[0]);
    }
    let l = means.len();
    let diff = |a: usize, b: usize| (means[a] - means[b]).abs();
    let error = if l >= 3 {
        diff(l - 1, l - 2).max(diff(l - 2, l - 3))
    } else {
        f64::INFINITY
    };
    Estimate {
        value: means[l - 1],
        error: error + 4.0 * f64::EPSILON * scale,
        terms: values.len(),
        method: SumMethod::Euler,
    }
}

/// Polynomial extrapolation to zero of `samples = [(eps_i, g(eps_i))]`
/// (Neville's scheme). The error is the change made by the last point.
pub fn richardson(samples: &[(f64, f64)]) -> Estimate {
    let m = samples.len();
    let mut table: Vec<f64> = samples.iter().map(|(_, g)| *g).collect();
    let mut prev_best = f64::NAN;
    let mut best = table[0];
    for level in 1..m {
        for i in (level..m).rev() {
            let (ei, ej) = (samples[i].0, samples[i - level].0);
            table[i] = (ei * table[i - 1] - ej * table[i]) / (ei - ej);
        }
        prev_best = best;
        best = table[m - 1];
    }
    let error = if m >= 2 {
        (best - prev_best).abs()
    } else {
        f64::INFINITY
    };
    Estimate {
        value: best,
        error,
        terms: m,
        method: SumMethod::Richardson,
    }
}
