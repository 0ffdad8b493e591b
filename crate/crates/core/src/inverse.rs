//! From a recurrence for `M(n) = ∫_0^1 x^n f(x) dx` back to a differential
//! equation for `f(x)`.
//!
//! Reading the Mellin image of `(-1)^k x^(k+i) f^(k)(x)` backwards,
//!
//! ```text
//! M[(-1)^k x^(k+i) f^(k)](n) = (n+k+i)!/(n+i)! M(n+i) + (boundary terms)
//! ```
//!
//! and `(n+k+i)!/(n+i)! = n^k + a(n)` with `deg a < k`. So a term
//! `c n^k M(n+i)` can be traded for `c (-1)^k x^(k+i) f^(k)(x)` minus terms of
//! lower degree in `n`. One [`reduction_pass`] does this for every shift at
//! the current top degree `k`; after at most `k + 1` passes no sequence terms
//! remain and the relation reads
//!
//! ```text
//! q_l(x) f^(l)(x) + ... + q_0(x) f(x) + sum_j r_j(n) f^(j)(1) = 0.
//! ```
//!
//! If boundary terms survive, [`eliminate_boundary`] differentiates once in
//! `x`, which removes them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forward::mellin_of_term;
use crate::operators::{
    normalize_diffop, normalize_recop, write_term, BoundarySymbol, DiffOp, InhomPart, RecOp,
};
use crate::poly::{Polynomial, Var};
use crate::scalar;

/// `sum_j q_j(x) f^(j)(x) + sum_i p_i(n) f(n+i) + inhom = 0`, where the
/// differential terms stand for their Mellin transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRelation {
    /// shift -> coefficient in `n`; no zero entries.
    pub rec_part: BTreeMap<i64, Polynomial>,
    /// derivative order -> coefficient in `x`; no zero entries.
    pub diff_part: BTreeMap<usize, Polynomial>,
    pub inhom: InhomPart,
}

impl MixedRelation {
    pub fn from_recop(rec: &RecOp) -> Self {
        let rec_part = rec
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (i as i64, p.clone()))
            .collect();
        MixedRelation {
            rec_part,
            diff_part: BTreeMap::new(),
            inhom: rec.inhom().clone(),
        }
    }

    /// Top degree in `n` over the remaining sequence terms.
    pub fn rec_degree(&self) -> Option<usize> {
        self.rec_part.values().filter_map(Polynomial::degree).max()
    }

    fn add_rec(&mut self, shift: i64, p: &Polynomial) {
        let sum = match self.rec_part.get(&shift) {
            Some(old) => old + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.rec_part.remove(&shift);
        } else {
            self.rec_part.insert(shift, sum);
        }
    }

    fn add_diff(&mut self, order: usize, q: &Polynomial) {
        let sum = match self.diff_part.get(&order) {
            Some(old) => old + q,
            None => q.clone(),
        };
        if sum.is_zero() {
            self.diff_part.remove(&order);
        } else {
            self.diff_part.insert(order, sum);
        }
    }
}

fn derivative_name(j: usize) -> String {
    match j {
        0 => "f(x)".into(),
        1 => "f'(x)".into(),
        2 => "f''(x)".into(),
        _ => format!("f^({j})(x)"),
    }
}

/// e.g. `-(x^3 - x)*f'(x) - f(n+2) - f(n+1) = 0`.
impl fmt::Display for MixedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, q) in self.diff_part.iter().rev() {
            write_term(f, &mut first, q, Some(&derivative_name(*j)))?;
        }
        for (i, p) in self.rec_part.iter().rev() {
            let atom = match *i {
                0 => "f(n)".to_string(),
                i if i > 0 => format!("f(n+{i})"),
                i => format!("f(n{i})"),
            };
            write_term(f, &mut first, p, Some(&atom))?;
        }
        for (sym, r) in self.inhom.iter() {
            let name = match sym {
                BoundarySymbol::DerivAtOne(0) => "f(1)".to_string(),
                BoundarySymbol::DerivAtOne(1) => "f'(1)".to_string(),
                other => other.to_string(),
            };
            write_term(f, &mut first, r, Some(&name))?;
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(" = 0")
    }
}

/// Removes the top `n`-degree from every sequence term.
///
/// For each shift `i` whose coefficient has `n^k` coefficient `c_i`, adds
/// `c_i (-1)^k x^(k+i) f^(k)(x)` and subtracts the expanded Mellin image of
/// the same term. Fails with [`Error::InvariantViolation`] if an `n^k` term
/// survives.
pub fn reduction_pass(rel: &MixedRelation) -> Result<MixedRelation> {
    let k = rel
        .rec_degree()
        .ok_or_else(|| Error::DegenerateRelation("no sequence terms left to reduce".into()))?;
    let mut out = rel.clone();
    let sign = if k % 2 == 0 { scalar::int(1) } else { scalar::int(-1) };
    for (&i, p) in &rel.rec_part {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let m = k as i64 + i;
        if m < 0 {
            return Err(Error::UnsupportedInput(format!(
                "shift {i} is below -{k}; normalize the recurrence first"
            )));
        }
        let weight = &c * &sign;
        out.add_diff(k, &Polynomial::monomial(weight.clone(), m as usize, Var::X));

        let img = mellin_of_term(m, k as i64)?;
        debug_assert_eq!(img.shift, i);
        out.add_rec(i, &-img.coeff.scale(&weight));
        out.inhom.extend(&img.inhom.map(|r| -r.scale(&weight)))?;
    }
    for (i, p) in &out.rec_part {
        if p.degree().is_some_and(|d| d >= k) {
            return Err(Error::InvariantViolation(format!(
                "degree {k} term survived reduction at shift {i}: {p}"
            )));
        }
    }
    Ok(out)
}

/// Turns a relation without sequence terms into a homogeneous ODE,
/// differentiating once if boundary terms remain. The result is normalized.
pub fn eliminate_boundary(rel: &MixedRelation) -> Result<DiffOp> {
    Ok(normalize_diffop(&eliminate_boundary_raw(rel)?.0)?)
}

/// Like [`eliminate_boundary`], but returns the operator before normalization
/// together with whether a differentiation happened.
pub fn eliminate_boundary_raw(rel: &MixedRelation) -> Result<(DiffOp, bool)> {
    if !rel.rec_part.is_empty() {
        return Err(Error::UnsupportedInput(
            "sequence terms remain; run reduction passes first".into(),
        ));
    }
    let Some(&top) = rel.diff_part.keys().next_back() else {
        return Err(Error::DegenerateRelation(
            "the differential part vanished".into(),
        ));
    };
    let mut coeffs = vec![Polynomial::zero(Var::X); top + 1];
    for (j, q) in &rel.diff_part {
        coeffs[*j] = q.clone();
    }
    let op = DiffOp::new(coeffs)?;
    if rel.inhom.is_empty() {
        return Ok((op, false));
    }
    // The boundary terms are constants in x; their n-dependent weights do not
    // survive d/dx.
    let diffed = op.differentiate();
    if diffed.coeffs().iter().any(|q| q.var() != Var::X) {
        return Err(Error::InvariantViolation(
            "differentiated relation still depends on n".into(),
        ));
    }
    Ok((diffed, true))
}

/// Every intermediate stage of [`rec_to_ode`].
#[derive(Clone, Debug)]
pub struct InverseTrace {
    /// The normalized input.
    pub input: RecOp,
    /// The relation after each reduction pass, starting with the input.
    pub passes: Vec<MixedRelation>,
    /// Top `n`-degree reduced in each pass.
    pub degrees: Vec<usize>,
    /// The operator before normalization.
    pub raw: DiffOp,
    pub differentiated: bool,
    pub ode: DiffOp,
}

impl InverseTrace {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("input: {} = 0", self.input)];
        for (idx, (rel, k)) in self.passes.iter().skip(1).zip(&self.degrees).enumerate() {
            out.push(format!("pass {} (degree {k}): {rel}", idx + 1));
        }
        if self.differentiated {
            out.push(format!("differentiated: {} = 0", self.raw));
        }
        out.push(format!("result: {} = 0", self.ode));
        out
    }
}

/// A differential equation for `f` given a homogeneous recurrence for its
/// Mellin transform. The recurrence is normalized first.
pub fn rec_to_ode(rec: &RecOp) -> Result<DiffOp> {
    Ok(rec_to_ode_traced(rec)?.ode)
}

pub fn rec_to_ode_traced(rec: &RecOp) -> Result<InverseTrace> {
    if !rec.is_homogeneous() {
        return Err(Error::UnsupportedInput(
            "inverse conversion needs a homogeneous recurrence".into(),
        ));
    }
    let input = normalize_recop(rec)?;
    let mut rel = MixedRelation::from_recop(&input);
    let max_passes = input.max_degree() + 1;
    let mut passes = vec![rel.clone()];
    let mut degrees = Vec::new();
    while let Some(k) = rel.rec_degree() {
        if let Some(&prev) = degrees.last() {
            if k >= prev {
                return Err(Error::InvariantViolation(format!(
                    "degree did not drop: {prev} -> {k}"
                )));
            }
        }
        if degrees.len() == max_passes {
            return Err(Error::InvariantViolation(format!(
                "more than {max_passes} reduction passes"
            )));
        }
        rel = reduction_pass(&rel)?;
        degrees.push(k);
        passes.push(rel.clone());
    }
    let (raw, differentiated) = eliminate_boundary_raw(&rel)?;
    let ode = normalize_diffop(&raw)?;
    Ok(InverseTrace {
        input,
        passes,
        degrees,
        raw,
        differentiated,
        ode,
    })
}
