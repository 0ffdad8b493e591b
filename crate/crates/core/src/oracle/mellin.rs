//! Termwise Mellin moments and boundary values of a truncated series.

use num_traits::One;

use crate::error::{Error, Result};
use crate::oracle::series::SeriesExpansion;
use crate::oracle::summation::{estimate_sum, richardson, sum_series, Estimate};
use crate::scalar::{self, Scalar};

/// `∫_0^1 x^n f(x) dx = sum_k f_k / (n + k + 1)`.
pub fn numeric_mellin(s: &SeriesExpansion, n: usize, tol: f64) -> Result<Estimate> {
    let terms = s.weighted_terms(|k| scalar::rat(1, (n + k + 1) as i64));
    sum_series(&terms, tol)
}

/// `∫_0^1 (x^n - 1) f(x) dx = sum_k f_k (1/(n+k+1) - 1/(k+1))`, with the
/// difference taken inside each term.
pub fn numeric_regularized_mellin(s: &SeriesExpansion, n: usize, tol: f64) -> Result<Estimate> {
    let terms = s.weighted_terms(|k| scalar::rat(-(n as i64), ((n + k + 1) * (k + 1)) as i64));
    sum_series(&terms, tol)
}

/// `f^(j)(1) = sum_k k(k-1)...(k-j+1) f_k`, summed directly when the series
/// allows it and otherwise extrapolated from `f^(j)(1 - eps)`.
pub fn numeric_boundary(s: &SeriesExpansion, j: usize) -> Result<Estimate> {
    let weight = |k: usize| -> Scalar {
        if k < j {
            return Scalar::from_integer(0.into());
        }
        (k - j + 1..=k).fold(Scalar::one(), |acc, t| acc * scalar::int(t as i64))
    };
    let terms = s.weighted_terms(weight);
    let direct = estimate_sum(&terms);
    if let Ok(e) = direct {
        if e.error <= 1e-10 * e.value.abs().max(1.0) {
            return Ok(e);
        }
    }
    let extrapolated = extrapolate_at_one(&terms, j);
    match (direct, extrapolated) {
        (Ok(a), Some(b)) => Ok(if a.error <= b.error { a } else { b }),
        (Ok(a), None) => Ok(a),
        (Err(_), Some(b)) if b.error.is_finite() => Ok(b),
        _ => Err(Error::OracleInapplicable(format!(
            "the series for f^({j}) does not converge at x = 1"
        ))),
    }
}

/// Richardson extrapolation of `sum_k t_k (1-eps)^(k-j)` to `eps = 0`, using
/// the `eps` values for which the truncated part is negligible.
fn extrapolate_at_one(terms: &[f64], j: usize) -> Option<Estimate> {
    let k = terms.len() as f64;
    let mut samples = Vec::new();
    let mut eps = 0.25;
    while eps * k >= 40.0 && samples.len() < 10 {
        let r: f64 = 1.0 - eps;
        let g: f64 = terms
            .iter()
            .enumerate()
            .skip(j)
            .map(|(i, t)| t * r.powi((i - j) as i32))
            .sum();
        samples.push((eps, g));
        eps *= 0.5;
    }
    (samples.len() >= 3).then(|| Estimate {
        terms: terms.len(),
        ..richardson(&samples)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DiffOp;
    use crate::oracle::series::{expand, SeriesMode};
    use crate::poly::{Polynomial, Var};
    use crate::scalar::{int, rat};

    fn ode(c: &[&[i64]]) -> DiffOp {
        DiffOp::new(c.iter().map(|q| Polynomial::from_ints(q, Var::X)).collect()).unwrap()
    }

    fn one_over_one_plus_x(k: usize) -> SeriesExpansion {
        expand(&ode(&[&[1], &[1, 1]]), &[int(1)], k, SeriesMode::Exact).unwrap()
    }

    #[test]
    fn moments_of_one_over_one_plus_x() {
        let s = one_over_one_plus_x(200);
        let ln2 = std::f64::consts::LN_2;
        let m2 = numeric_mellin(&s, 2, 1e-12).unwrap();
        assert!((m2.value - (ln2 - 0.5)).abs() < 1e-12);
        let r1 = numeric_regularized_mellin(&s, 1, 1e-12).unwrap();
        assert!((r1.value - (1.0 - 2.0 * ln2)).abs() < 1e-12);
    }

    #[test]
    fn moments_of_constant() {
        let s = expand(&ode(&[&[], &[1]]), &[int(1)], 40, SeriesMode::Exact).unwrap();
        for n in 0..=50 {
            let m = numeric_mellin(&s, n, 1e-15).unwrap();
            assert_eq!(m.value, 1.0 / (n as f64 + 1.0));
        }
        let r = numeric_regularized_mellin(&s, 3, 0.0).unwrap();
        assert_eq!(r.value, -0.75);
    }

    #[test]
    fn moment_of_one_over_two_plus_x() {
        let s = expand(&ode(&[&[1], &[2, 1]]), &[rat(1, 2)], 80, SeriesMode::Exact).unwrap();
        let m0 = numeric_mellin(&s, 0, 1e-12).unwrap();
        assert!((m0.value - 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn boundary_values() {
        let s = expand(&ode(&[&[], &[1]]), &[int(1)], 40, SeriesMode::Exact).unwrap();
        assert_eq!(numeric_boundary(&s, 0).unwrap().value, 1.0);
        let s = one_over_one_plus_x(200);
        assert!((numeric_boundary(&s, 0).unwrap().value - 0.5).abs() < 1e-12);
        assert!((numeric_boundary(&s, 1).unwrap().value + 0.25).abs() < 1e-12);
        assert!((numeric_boundary(&s, 2).unwrap().value - 0.25).abs() < 1e-10);
    }

    #[test]
    fn boundary_by_extrapolation() {
        // 1/(3 - x) at one
        let s = expand(&ode(&[&[-1], &[3, -1]]), &[rat(1, 3)], 20_000, SeriesMode::Float).unwrap();
        let terms = s.values_f64();
        let e = extrapolate_at_one(&terms, 0).unwrap();
        assert!((e.value - 0.5).abs() < 1e-9, "{e:?}");
    }

    #[test]
    fn divergent_moment_is_refused() {
        let ex1 = ode(&[&[0, -1, -1], &[0, 1, 0, -1]]);
        let s = expand(&ex1, &[int(1)], 4000, SeriesMode::Float).unwrap();
        assert!(matches!(
            numeric_mellin(&s, 0, 1e-8),
            Err(Error::OracleInapplicable(_))
        ));
    }
}
