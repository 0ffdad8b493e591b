//! Exact substitution of candidate solutions.

use crate::error::{Error, Result};
use crate::operators::{DiffOp, Operator, RecOp};
use crate::poly::Var;
use crate::ratfun::RationalFunction;

/// What is being checked against an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    /// `y(n+1)/y(n)` of a hypergeometric term.
    Ratio(RationalFunction),
    /// A rational function `f(x)`.
    Function(RationalFunction),
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub holds: bool,
    /// For a ratio `r`: `sum_i p_i(n) r(n) r(n+1) ... r(n+i-1)`, which is the
    /// operator applied to `y` divided by `y(n)`. For a function: `L f`.
    pub residual: RationalFunction,
}

pub fn verify_certificate(op: &Operator, candidate: &Candidate) -> Result<Certificate> {
    let residual = match (op, candidate) {
        (Operator::Rec(rec), Candidate::Ratio(r)) => {
            if r.var() != Var::N {
                return Err(Error::MalformedCandidate(format!("ratio {r} is not a function of n")));
            }
            if r.is_zero() {
                return Err(Error::MalformedCandidate("the ratio of a hypergeometric term is nonzero".into()));
            }
            if !rec.is_homogeneous() {
                return Err(Error::MalformedCandidate(
                    "hypergeometric candidates need a homogeneous recurrence".into(),
                ));
            }
            ratio_residual(rec, r)?
        }
        (Operator::Diff(ode), Candidate::Function(f)) => {
            if f.var() != Var::X {
                return Err(Error::MalformedCandidate(format!("{f} is not a function of x")));
            }
            apply_diffop(ode, f)?
        }
        (Operator::Rec(_), Candidate::Function(_)) => {
            return Err(Error::MalformedCandidate("a recurrence needs a ratio candidate".into()))
        }
        (Operator::Diff(_), Candidate::Ratio(_)) => {
            return Err(Error::MalformedCandidate("a differential equation needs a function candidate".into()))
        }
    };
    Ok(Certificate {
        holds: residual.is_zero(),
        residual,
    })
}

pub(crate) fn ratio_residual(rec: &RecOp, r: &RationalFunction) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero(Var::N);
    let mut prod = RationalFunction::one(Var::N);
    for (i, p) in rec.coeffs().iter().enumerate() {
        if i > 0 {
            prod = prod.mul(&r.shift(i as i64 - 1))?;
        }
        if !p.is_zero() {
            acc = acc.add(&prod.mul(&RationalFunction::from_poly(p.clone()))?)?;
        }
    }
    Ok(acc)
}

pub(crate) fn apply_diffop(ode: &DiffOp, f: &RationalFunction) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero(Var::X);
    let mut d = f.clone();
    for (j, q) in ode.coeffs().iter().enumerate() {
        if j > 0 {
            d = d.derivative();
        }
        if !q.is_zero() && !d.is_zero() {
            acc = acc.add(&d.mul(&RationalFunction::from_poly(q.clone()))?)?;
        }
    }
    Ok(acc)
}
