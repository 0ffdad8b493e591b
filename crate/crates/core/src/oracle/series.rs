//! Taylor coefficients of power-series solutions at zero.
//!
//! Substituting `f = sum_k f_k x^k` into `sum_{m,p} c_{m,p} x^m D^p` and using
//! `x^m D^p x^k = k(k-1)...(k-p+1) x^(k-p+m)`, the coefficient of `x^N` is
//!
//! ```text
//! sum_{m,p} c_{m,p} (N+s)(N+s-1)...(N+s-p+1) f_(N+s),    s = p - m,
//! ```
//!
//! with `f_k = 0` for `k < 0`. Every such equation must vanish.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::operators::{DiffOp, InhomPart, RecOp};
use crate::poly::{falling_factorial, Polynomial, Var};
use crate::scalar::{self, Scalar};

/// The equations `E_N: sum_s c_s(N) f_(N+s) = 0`, `N >= 0`, keyed by `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRelation {
    shifts: BTreeMap<i64, Polynomial>,
}

impl CoeffRelation {
    pub fn from_ode(ode: &DiffOp) -> Self {
        let mut shifts: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (p, q) in ode.coeffs().iter().enumerate() {
            for (m, c) in q.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let s = p as i64 - m as i64;
                let term = falling_factorial(s, p as i64)
                    .expect("order is nonnegative")
                    .scale(c);
                let entry = shifts.entry(s).or_insert_with(|| Polynomial::zero(Var::N));
                *entry = &*entry + &term;
            }
        }
        shifts.retain(|_, p| !p.is_zero());
        CoeffRelation { shifts }
    }

    pub fn shifts(&self) -> &BTreeMap<i64, Polynomial> {
        &self.shifts
    }

    /// Largest shift: `E_N` determines `f_(N + top)`.
    pub fn top(&self) -> i64 {
        *self.shifts.keys().next_back().expect("nonzero operator")
    }

    /// `E_N` evaluated on the given prefix; indices outside it count as zero.
    pub fn residual(&self, coeffs: &[Scalar], big_n: usize) -> Scalar {
        let n = scalar::int(big_n as i64);
        let mut acc = Scalar::zero();
        for (s, c) in &self.shifts {
            let idx = big_n as i64 + s;
            if idx < 0 || idx as usize >= coeffs.len() {
                continue;
            }
            acc += c.eval(&n) * &coeffs[idx as usize];
        }
        acc
    }

    pub fn as_recop(&self) -> RecOp {
        RecOp::from_shifts(&self.shifts, InhomPart::new()).expect("nonzero operator")
    }
}

/// The recurrence satisfied by the Taylor coefficients of every power-series
/// solution of `ode`, re-indexed so that its lowest shift is zero.
pub fn ode_to_coeff_rec(ode: &DiffOp) -> RecOp {
    CoeffRelation::from_ode(ode).as_recop()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesCoeffs {
    Exact(Vec<Scalar>),
    Float(Vec<f64>),
}

/// `f_0, ..., f_K` for one solution of `source_ode`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesExpansion {
    pub coeffs: SeriesCoeffs,
    pub truncation_order: usize,
    pub source_ode: DiffOp,
}

impl SeriesExpansion {
    pub fn len(&self) -> usize {
        self.truncation_order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values_f64(&self) -> Vec<f64> {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => v.iter().map(scalar::to_f64).collect(),
            SeriesCoeffs::Float(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[Scalar]> {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => Some(v),
            SeriesCoeffs::Float(_) => None,
        }
    }

    /// `f_k * w(k)` as floats, computed exactly first when possible.
    pub(crate) fn weighted_terms(&self, w: impl Fn(usize) -> Scalar) -> Vec<f64> {
        match &self.coeffs {
            SeriesCoeffs::Exact(v) => v
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if c.is_zero() {
                        0.0
                    } else {
                        scalar::to_f64(&(c * w(k)))
                    }
                })
                .collect(),
            SeriesCoeffs::Float(v) => v
                .iter()
                .enumerate()
                .map(|(k, c)| c * scalar::to_f64(&w(k)))
                .collect(),
        }
    }
}

/// Unrolls the coefficient equations from `init` up to `f_k`.
///
/// The equations whose top index falls inside `init` are checked instead of
/// used; `init` must cover every index where the top coefficient vanishes.
pub fn expand(ode: &DiffOp, init: &[Scalar], k: usize, mode: SeriesMode) -> Result<SeriesExpansion> {
    if k + 1 < init.len() {
        return Err(Error::UnsupportedInput(format!(
            "truncation order {k} is below the {} initial coefficients",
            init.len()
        )));
    }
    let rel = CoeffRelation::from_ode(ode);
    let top = rel.top();
    let lead = &rel.shifts[&top];

    for big_n in 0..init.len() as i64 - top {
        if big_n >= 0 && !rel.residual(init, big_n as usize).is_zero() {
            return Err(Error::InconsistentInitialValues {
                power: big_n as usize,
            });
        }
    }

    let mut plan = Vec::new();
    for idx in init.len()..=k {
        let big_n = idx as i64 - top;
        if big_n < 0 {
            return Err(Error::InsufficientInitialValues {
                needed: top as usize,
                got: init.len(),
            });
        }
        let l = lead.eval(&scalar::int(big_n));
        if l.is_zero() {
            return Err(Error::SingularIndex { index: idx });
        }
        plan.push((idx, big_n, l));
    }

    let coeffs = match mode {
        SeriesMode::Exact => {
            let mut f = init.to_vec();
            for (idx, big_n, l) in plan {
                let mut acc = Scalar::zero();
                let n = scalar::int(big_n);
                for (s, c) in rel.shifts.range(..top) {
                    let j = big_n + s;
                    if j >= 0 {
                        acc += c.eval(&n) * &f[j as usize];
                    }
                }
                debug_assert_eq!(f.len(), idx);
                f.push(-acc / l);
            }
            SeriesCoeffs::Exact(f)
        }
        SeriesMode::Float => {
            let mut f: Vec<f64> = init.iter().map(scalar::to_f64).collect();
            let lower: Vec<(i64, &Polynomial)> =
                rel.shifts.range(..top).map(|(s, c)| (*s, c)).collect();
            for (_, big_n, l) in plan {
                let nf = big_n.to_f64().unwrap_or(f64::NAN);
                let mut acc = 0.0;
                for (s, c) in &lower {
                    let j = big_n + s;
                    if j >= 0 {
                        acc += c.eval_f64(nf) * f[j as usize];
                    }
                }
                f.push(-acc / scalar::to_f64(&l));
            }
            SeriesCoeffs::Float(f)
        }
    };
    Ok(SeriesExpansion {
        coeffs,
        truncation_order: k,
        source_ode: ode.clone(),
    })
}
