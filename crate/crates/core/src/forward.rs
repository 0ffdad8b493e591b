//! From a differential equation for `f(x)` to a recurrence for its Mellin
//! transform `M(n) = ∫_0^1 x^n f(x) dx`.
//!
//! Integrating `x^(n+m) f^(p)(x)` by parts `p` times gives
//!
//! ```text
//! M[x^m f^(p)](n) = (-1)^p (n+m)!/(n+m-p)! M(n+m-p)
//!                 + sum_{i=0}^{p-1} (-1)^i (n+m)!/(n+m-i)! f^(p-1-i)(1)
//! ```
//!
//! assuming the boundary terms at zero vanish. Applying this to every monomial
//! `x^m D^p` of an operator and summing yields a recurrence whose
//! inhomogeneous part collects the values `f^(j)(1)` as boundary symbols.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::operators::{normalize_recop, BoundarySymbol, DiffOp, InhomPart, RecOp};
use crate::poly::{falling_factorial, Polynomial, Var};

/// The Mellin image of one monomial term `x^m f^(p)(x)`: a single coefficient
/// at shift `m - p` plus boundary terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MellinTermImage {
    pub shift: i64,
    pub coeff: Polynomial,
    pub inhom: InhomPart,
}

pub fn mellin_of_term(m: i64, p: i64) -> Result<MellinTermImage> {
    if m < 0 {
        return Err(Error::NegativeArgument { what: "m", value: m });
    }
    if p < 0 {
        return Err(Error::NegativeArgument { what: "p", value: p });
    }
    let sign = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    let coeff = falling_factorial(m, p)?.scale(&crate::scalar::int(sign(p)));
    let mut inhom = InhomPart::new();
    for i in 0..p {
        let c = falling_factorial(m, i)?.scale(&crate::scalar::int(sign(i)));
        inhom.add_term(BoundarySymbol::DerivAtOne((p - 1 - i) as u32), &c)?;
    }
    Ok(MellinTermImage {
        shift: m - p,
        coeff,
        inhom,
    })
}

/// Sums the Mellin images of all terms of `ode`, before normalization.
/// Shifts may be negative.
pub fn mellin_image(ode: &DiffOp) -> Result<(BTreeMap<i64, Polynomial>, InhomPart)> {
    let mut shifts: BTreeMap<i64, Polynomial> = BTreeMap::new();
    let mut inhom = InhomPart::new();
    for (p, q) in ode.coeffs().iter().enumerate() {
        for (m, c) in q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = mellin_of_term(m as i64, p as i64)?;
            let entry = shifts
                .entry(img.shift)
                .or_insert_with(|| Polynomial::zero(Var::N));
            *entry = &*entry + &img.coeff.scale(c);
            inhom.extend(&img.inhom.map(|r| r.scale(c)))?;
        }
    }
    Ok((shifts, inhom))
}

/// The recurrence satisfied by `n -> M[f](n)` for every solution `f` of `ode`
/// whose Mellin transform exists, normalized.
pub fn ode_to_mellin_rec(ode: &DiffOp) -> Result<RecOp> {
    let (shifts, inhom) = mellin_image(ode)?;
    normalize_recop(&RecOp::from_shifts(&shifts, inhom)?)
}
