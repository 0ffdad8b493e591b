//! Linear differential and recurrence operators with polynomial coefficients.
//!
//! A [`DiffOp`] `q_l(x) D^l + ... + q_0(x)` stands for the equation
//! `q_l(x) f^(l)(x) + ... + q_0(x) f(x) = 0`. A [`RecOp`] stands for
//! `p_d(n) f(n+d) + ... + p_0(n) f(n) + sum_j r_j(n) c_j = 0`, where the
//! `c_j` are opaque [`BoundarySymbol`]s collected in an [`InhomPart`].
//!
//! Both operators are only meaningful up to a nonzero polynomial factor and,
//! for recurrences, a re-indexing `n -> n + s`. [`normalize_diffop`] and
//! [`normalize_recop`] pick one representative per class: lowest shift zero,
//! polynomial content removed, integer coefficients with gcd one, and a
//! positive leading scalar in the leading coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Var};
use crate::scalar::{self, Scalar};

/// An opaque constant appearing in converted relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundarySymbol {
    /// `f^(j)(1)`, the j-th derivative of the function at one.
    DerivAtOne(u32),
    /// `M(n0)`, a fixed Mellin moment.
    MellinMoment(u32),
}

impl fmt::Display for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySymbol::DerivAtOne(j) => write!(f, "f^({j})(1)"),
            BoundarySymbol::MellinMoment(k) => write!(f, "M({k})"),
        }
    }
}

impl FromStr for BoundarySymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Json(format!("unknown boundary symbol `{s}`"));
        if s == "f(1)" {
            return Ok(BoundarySymbol::DerivAtOne(0));
        }
        if let Some(rest) = s.strip_prefix("f^(") {
            let j = rest.strip_suffix(")(1)").ok_or_else(bad)?;
            return j.parse().map(BoundarySymbol::DerivAtOne).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("M(") {
            let k = rest.strip_suffix(')').ok_or_else(bad)?;
            return k.parse().map(BoundarySymbol::MellinMoment).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// `sum_j r_j(n) c_j`; zero terms are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InhomPart {
    terms: BTreeMap<BoundarySymbol, Polynomial>,
}

impl InhomPart {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, sym: &BoundarySymbol) -> Option<&Polynomial> {
        self.terms.get(sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BoundarySymbol, &Polynomial)> {
        self.terms.iter()
    }

    /// Adds `coeff * sym`, dropping the entry if it cancels.
    pub fn add_term(&mut self, sym: BoundarySymbol, coeff: &Polynomial) -> Result<()> {
        if coeff.var() != Var::N {
            return Err(Error::VariableMismatch {
                expected: Var::N,
                found: coeff.var(),
            });
        }
        let sum = match self.terms.get(&sym) {
            Some(old) => old.try_add(coeff)?,
            None => coeff.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&sym);
        } else {
            self.terms.insert(sym, sum);
        }
        Ok(())
    }

    pub fn extend(&mut self, other: &InhomPart) -> Result<()> {
        for (sym, c) in other.iter() {
            self.add_term(*sym, c)?;
        }
        Ok(())
    }

    pub(crate) fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> InhomPart {
        InhomPart {
            terms: self
                .terms
                .iter()
                .map(|(s, p)| (*s, f(p)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }
}

/// `q_0(x) + q_1(x) D + ... + q_l(x) D^l`, index = derivative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    coeffs: Vec<Polynomial>,
}

impl DiffOp {
    /// Trailing zero coefficients are dropped; all coefficients must be in `x`.
    pub fn new(mut coeffs: Vec<Polynomial>) -> Result<Self> {
        if let Some(p) = coeffs.iter().find(|p| p.var() != Var::X) {
            return Err(Error::VariableMismatch {
                expected: Var::X,
                found: p.var(),
            });
        }
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(DiffOp { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Polynomial {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(Var::X))
    }

    pub fn leading_coeff(&self) -> &Polynomial {
        &self.coeffs[self.order()]
    }

    /// `(d/dx) L`: the operator `f -> (L f)'`, of order one higher.
    pub fn differentiate(&self) -> DiffOp {
        let mut coeffs = vec![Polynomial::zero(Var::X); self.coeffs.len() + 1];
        for (j, q) in self.coeffs.iter().enumerate() {
            coeffs[j] = &coeffs[j] + &q.derivative();
            coeffs[j + 1] = &coeffs[j + 1] + q;
        }
        DiffOp::new(coeffs).expect("leading coefficient survives differentiation")
    }

    /// Equality after normalization.
    pub fn equivalent(&self, other: &DiffOp) -> bool {
        match (normalize_diffop(self), normalize_diffop(other)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

/// `p_0(n) + p_1(n) S + ... + p_d(n) S^d` plus an inhomogeneous part;
/// index = shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecOp {
    coeffs: Vec<Polynomial>,
    inhom: InhomPart,
}

impl RecOp {
    pub fn new(mut coeffs: Vec<Polynomial>, inhom: InhomPart) -> Result<Self> {
        if let Some(p) = coeffs.iter().find(|p| p.var() != Var::N) {
            return Err(Error::VariableMismatch {
                expected: Var::N,
                found: p.var(),
            });
        }
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(RecOp { coeffs, inhom })
    }

    pub fn homogeneous(coeffs: Vec<Polynomial>) -> Result<Self> {
        Self::new(coeffs, InhomPart::new())
    }

    /// Builds the relation `sum_k map[k](n) f(n+k) + inhom = 0`, where shifts may
    /// be negative, and re-indexes it with `n -> n - s` (`s` the lowest shift
    /// present) so that the lowest shift becomes zero.
    pub fn from_shifts(map: &BTreeMap<i64, Polynomial>, inhom: InhomPart) -> Result<Self> {
        let nonzero: Vec<(i64, &Polynomial)> = map
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| (*k, p))
            .collect();
        let Some(&(low, _)) = nonzero.first() else {
            return Err(Error::ZeroOperator);
        };
        let high = nonzero.last().map(|(k, _)| *k).unwrap_or(low);
        let mut coeffs = vec![Polynomial::zero(Var::N); (high - low + 1) as usize];
        for (k, p) in nonzero {
            coeffs[(k - low) as usize] = p.shift(-low);
        }
        let inhom = inhom.map(|p| p.shift(-low));
        RecOp::new(coeffs, inhom)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Polynomial {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(Var::N))
    }

    pub fn inhom(&self) -> &InhomPart {
        &self.inhom
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inhom.is_empty()
    }

    /// Maximum degree in `n` over the shift coefficients.
    pub fn max_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Drops zero low shifts by re-indexing; no content or sign changes.
    pub fn shift_normalized(&self) -> RecOp {
        let map: BTreeMap<i64, Polynomial> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, p)| (i as i64, p.clone()))
            .collect();
        RecOp::from_shifts(&map, self.inhom.clone()).expect("nonzero operator")
    }

    /// The same relation written at index `n + s`: coefficients become `p_i(n + s)`.
    pub fn substitute_shift(&self, s: i64) -> RecOp {
        RecOp {
            coeffs: self.coeffs.iter().map(|p| p.shift(s)).collect(),
            inhom: self.inhom.map(|p| p.shift(s)),
        }
    }

    /// Equality after normalization.
    pub fn equivalent(&self, other: &RecOp) -> bool {
        match (normalize_recop(self), normalize_recop(other)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

/// Either kind of operator, as produced by the parser and the JSON reader.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    Diff(DiffOp),
    Rec(RecOp),
}

impl Operator {
    pub fn normalized(&self) -> Result<Operator> {
        Ok(match self {
            Operator::Diff(d) => Operator::Diff(normalize_diffop(d)?),
            Operator::Rec(r) => Operator::Rec(normalize_recop(r)?),
        })
    }
}

/// Divides a family of polynomials by their common polynomial gcd and by their
/// common rational content, then fixes the sign so that the leading scalar of
/// the coefficient at `lead` is positive.
fn canonical_family(polys: &mut [Polynomial], lead: usize) -> Result<()> {
    let var = polys[lead].var();
    let mut g = Polynomial::zero(var);
    for p in polys.iter().filter(|p| !p.is_zero()) {
        g = if g.is_zero() { p.monic() } else { g.gcd(p)? };
    }
    if g.is_zero() {
        return Err(Error::ZeroOperator);
    }
    for p in polys.iter_mut() {
        *p = p.exact_div(&g)?;
    }
    let mut c = scalar::content(polys.iter().flat_map(|p| p.coeffs().iter()));
    if polys[lead].leading_coeff().is_negative() {
        c = -c;
    }
    let inv = c.recip();
    for p in polys.iter_mut() {
        *p = p.scale(&inv);
    }
    Ok(())
}

/// Canonical representative of `op` up to a polynomial factor.
pub fn normalize_diffop(op: &DiffOp) -> Result<DiffOp> {
    let mut coeffs = op.coeffs.clone();
    let lead = op.order();
    canonical_family(&mut coeffs, lead)?;
    DiffOp::new(coeffs)
}

/// Canonical representative of `op` up to a polynomial factor and re-indexing.
/// The inhomogeneous part takes part in content removal.
pub fn normalize_recop(op: &RecOp) -> Result<RecOp> {
    let shifted = op.shift_normalized();
    let order = shifted.order();
    let syms: Vec<BoundarySymbol> = shifted.inhom.iter().map(|(s, _)| *s).collect();
    let mut family: Vec<Polynomial> = shifted.coeffs.clone();
    family.extend(shifted.inhom.iter().map(|(_, p)| p.clone()));
    canonical_family(&mut family, order)?;
    let inhom_polys = family.split_off(order + 1);
    let mut inhom = InhomPart::new();
    for (s, p) in syms.into_iter().zip(inhom_polys) {
        inhom.add_term(s, &p)?;
    }
    RecOp::new(family, inhom)
}

/// Minimal numeric interface needed to evaluate residuals.
pub trait ResidualValue: Clone + Sized {
    fn zero_value() -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn mul_add(acc: Self, coeff: &Polynomial, n: usize, value: &Self) -> Self;
}

impl ResidualValue for Scalar {
    fn zero_value() -> Self {
        Scalar::zero()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn mul_add(acc: Self, coeff: &Polynomial, n: usize, value: &Self) -> Self {
        acc + coeff.eval(&scalar::int(n as i64)) * value
    }
}

impl ResidualValue for f64 {
    fn zero_value() -> Self {
        0.0
    }
    fn from_scalar(s: &Scalar) -> Self {
        scalar::to_f64(s)
    }
    fn mul_add(acc: Self, coeff: &Polynomial, n: usize, value: &Self) -> Self {
        acc + coeff.eval_f64(n as f64) * value
    }
}

/// Residuals `sum_i p_i(n) seq[n+i] + sum_j r_j(n) c_j` for
/// `n = 0 .. len(seq) - order - 1`. All residuals are zero iff the sequence
/// satisfies the relation on that range.
pub fn apply_recop<T: ResidualValue>(
    op: &RecOp,
    seq: &[T],
    boundary_values: &BTreeMap<BoundarySymbol, T>,
) -> Result<Vec<T>> {
    let order = op.order();
    if seq.len() < order + 1 {
        return Err(Error::SequenceTooShort {
            needed: order + 1,
            got: seq.len(),
        });
    }
    for (sym, _) in op.inhom.iter() {
        if !boundary_values.contains_key(sym) {
            return Err(Error::MissingBoundaryValue(*sym));
        }
    }
    Ok((0..seq.len() - order)
        .map(|n| {
            let mut acc = T::zero_value();
            for (i, p) in op.coeffs.iter().enumerate() {
                if !p.is_zero() {
                    acc = T::mul_add(acc, p, n, &seq[n + i]);
                }
            }
            for (sym, r) in op.inhom.iter() {
                acc = T::mul_add(acc, r, n, &boundary_values[sym]);
            }
            acc
        })
        .collect())
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    coeff: &Polynomial,
    atom: Option<&str>,
) -> fmt::Result {
    if coeff.is_zero() {
        return Ok(());
    }
    let nonzero_terms = coeff.coeffs().iter().filter(|c| !c.is_zero()).count();
    let neg = coeff.leading_coeff().is_negative();
    let abs = if neg { -coeff } else { coeff.clone() };
    let body = if nonzero_terms == 1 {
        match atom {
            Some(a) if abs == Polynomial::one(abs.var()) => a.to_string(),
            Some(a) => format!("{abs}*{a}"),
            None => abs.to_string(),
        }
    } else {
        match atom {
            Some(a) => format!("({abs})*{a}"),
            None => format!("({abs})"),
        }
    };
    match (*first, neg) {
        (true, false) => write!(f, "{body}")?,
        (true, true) => write!(f, "-{body}")?,
        (false, false) => write!(f, " + {body}")?,
        (false, true) => write!(f, " - {body}")?,
    }
    *first = false;
    Ok(())
}

/// e.g. `(x^3 - x)*Dx + (x^2 + x)`; re-parses to the same operator. A
/// constant operator of order zero is written `c*f(x)` so that its kind
/// survives.
impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.order() == 0 && self.coeffs[0].is_constant() {
            return write_term(f, &mut first, &self.coeffs[0], Some("f(x)"));
        }
        for (j, q) in self.coeffs.iter().enumerate().rev() {
            let atom = match j {
                0 => None,
                1 => Some("Dx".to_string()),
                _ => Some(format!("Dx^{j}")),
            };
            write_term(f, &mut first, q, atom.as_deref())?;
        }
        Ok(())
    }
}

/// e.g. `(n + 2)*S^2 - S - (n + 1)`, followed by boundary terms such as
/// `- 6*f^(0)(1)`.
impl fmt::Display for RecOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.order() == 0 && self.coeffs[0].is_constant() && self.inhom.is_empty() {
            return write_term(f, &mut first, &self.coeffs[0], Some("f(n)"));
        }
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            let atom = match i {
                0 => None,
                1 => Some("S".to_string()),
                _ => Some(format!("S^{i}")),
            };
            write_term(f, &mut first, p, atom.as_deref())?;
        }
        for (sym, r) in self.inhom.iter() {
            write_term(f, &mut first, r, Some(&sym.to_string()))?;
        }
        Ok(())
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Diff(d) => d.fmt(f),
            Operator::Rec(r) => r.fmt(f),
        }
    }
}
