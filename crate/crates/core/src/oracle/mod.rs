//! An independent numeric check of the converters.
//!
//! A function is given by an ODE and the first Taylor coefficients at zero.
//! The oracle unrolls the coefficient recurrence, integrates termwise to get
//! Mellin moments, and evaluates recurrences on those moments. None of this
//! goes through the symbolic conversion code.

pub mod mellin;
pub mod quadrature;
pub mod series;
pub mod summation;

use std::collections::BTreeMap;

pub use mellin::{numeric_boundary, numeric_mellin, numeric_regularized_mellin};
pub use series::{expand, ode_to_coeff_rec, CoeffRelation, SeriesCoeffs, SeriesExpansion, SeriesMode};
pub use summation::{sum_series, Estimate, SumMethod};

use crate::error::{Error, Result};
use crate::operators::{apply_recop, BoundarySymbol, DiffOp, RecOp};
use crate::scalar::Scalar;

/// Environment variable overriding [`OracleConfig::max_terms`].
pub const MAX_TERMS_ENV: &str = "HOLOMELLIN_MAX_TERMS";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Absolute error accepted for each moment.
    pub tol: f64,
    /// Largest truncation order tried.
    pub max_terms: usize,
    /// First truncation order tried; doubled until `tol` is met.
    pub start_terms: usize,
    /// Truncation orders up to this one are expanded in exact arithmetic.
    pub exact_up_to: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: 1e-8,
            max_terms: 1_000_000,
            start_terms: 64,
            exact_up_to: 256,
        }
    }
}

impl OracleConfig {
    /// Defaults, with `max_terms` taken from `HOLOMELLIN_MAX_TERMS` if set.
    pub fn from_env() -> Result<Self> {
        let mut c = Self::default();
        if let Ok(v) = std::env::var(MAX_TERMS_ENV) {
            c.max_terms = v.trim().parse().map_err(|_| {
                Error::UnsupportedInput(format!("{MAX_TERMS_ENV} must be a positive integer, got `{v}`"))
            })?;
        }
        Ok(c)
    }
}

/// `M(n)` for every `n` in `ns`, growing the truncation order until every
/// moment meets `config.tol`.
pub fn mellin_moments(
    ode: &DiffOp,
    init: &[Scalar],
    ns: impl IntoIterator<Item = usize> + Clone,
    config: &OracleConfig,
) -> Result<Vec<Estimate>> {
    with_growing_series(ode, init, config, |s| {
        ns.clone()
            .into_iter()
            .map(|n| numeric_mellin(s, n, config.tol))
            .collect()
    })
}

/// Runs `eval` on longer and longer expansions until it succeeds. Divergence
/// reports are trusted once a few thousand terms have been inspected.
pub fn with_growing_series<T>(
    ode: &DiffOp,
    init: &[Scalar],
    config: &OracleConfig,
    mut eval: impl FnMut(&SeriesExpansion) -> Result<T>,
) -> Result<T> {
    let mut k = config.start_terms.max(init.len()).min(config.max_terms.max(init.len()));
    loop {
        let mode = if k <= config.exact_up_to {
            SeriesMode::Exact
        } else {
            SeriesMode::Float
        };
        let s = expand(ode, init, k, mode)?;
        let last_try = k >= config.max_terms;
        match eval(&s) {
            Ok(v) => return Ok(v),
            Err(Error::ToleranceNotReached { .. }) if !last_try => {}
            Err(Error::OracleInapplicable(_)) if !last_try && k < 4096 => {}
            Err(e) => return Err(e),
        }
        k = (k * 2).min(config.max_terms);
    }
}

/// Residuals of `rec` on the oracle's moments `M(0), ..., M(n_max + order)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub moments: Vec<f64>,
    pub boundary: BTreeMap<BoundarySymbol, f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Evaluates `rec` on the Mellin moments of the solution of `ode` with the
/// given initial Taylor coefficients, for `n = 0..=n_max`. Boundary symbols
/// are evaluated numerically as well.
pub fn verify_recurrence(
    ode: &DiffOp,
    init: &[Scalar],
    rec: &RecOp,
    n_max: usize,
    config: &OracleConfig,
) -> Result<VerifyReport> {
    let count = n_max + rec.order() + 1;
    let syms: Vec<BoundarySymbol> = rec.inhom().iter().map(|(s, _)| *s).collect();
    let (moments, boundary) = with_growing_series(ode, init, config, |s| {
        let moments = (0..count)
            .map(|n| numeric_mellin(s, n, config.tol).map(|e| e.value))
            .collect::<Result<Vec<f64>>>()?;
        let mut boundary = BTreeMap::new();
        for sym in &syms {
            let v = match sym {
                BoundarySymbol::DerivAtOne(j) => numeric_boundary(s, *j as usize)?.value,
                BoundarySymbol::MellinMoment(k) => numeric_mellin(s, *k as usize, config.tol)?.value,
            };
            boundary.insert(*sym, v);
        }
        Ok((moments, boundary))
    })?;
    let residuals = apply_recop(rec, &moments, &boundary)?;
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(VerifyReport {
        moments,
        boundary,
        residuals,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::ode_to_mellin_rec;
    use crate::poly::{Polynomial, Var};
    use crate::scalar::{int, rat};

    fn ode(c: &[&[i64]]) -> DiffOp {
        DiffOp::new(c.iter().map(|q| Polynomial::from_ints(q, Var::X)).collect()).unwrap()
    }

    #[test]
    fn moments_grow_the_series_as_needed() {
        // -log(1-x)/x: coefficients 1/(k+1), power-law tail
        let op = ode(&[&[-1], &[2, -3], &[0, 1, -1]]);
        let config = OracleConfig {
            tol: 1e-4,
            ..Default::default()
        };
        let m = mellin_moments(&op, &[int(1)], [0], &config).unwrap();
        // ∫ -log(1-x)/x dx = pi^2/6
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((m[0].value - exact).abs() <= 1e-4);
        assert!(m[0].terms > config.start_terms);
    }

    #[test]
    fn verify_forward_recurrence_with_boundary_terms() {
        // (1+x) f' + f = 0 with f = 1/(1+x); its Mellin recurrence involves f(1)
        let op = ode(&[&[1], &[1, 1]]);
        let rec = ode_to_mellin_rec(&op).unwrap();
        assert!(!rec.is_homogeneous());
        let config = OracleConfig {
            tol: 1e-12,
            ..Default::default()
        };
        let report = verify_recurrence(&op, &[int(1)], &rec, 20, &config).unwrap();
        assert!(report.max_residual < 1e-9, "{report:?}");
        assert!((report.boundary[&BoundarySymbol::DerivAtOne(0)] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn max_terms_from_env_is_validated() {
        // only the parsing path; the variable is not set in tests
        assert_eq!(OracleConfig::default().max_terms, 1_000_000);
        let c = OracleConfig {
            max_terms: 10,
            ..Default::default()
        };
        let op = ode(&[&[-1], &[2, -3], &[0, 1, -1]]);
        assert!(matches!(
            mellin_moments(&op, &[rat(1, 1)], [0], &c),
            Err(Error::ToleranceNotReached { .. })
        ));
    }
}
