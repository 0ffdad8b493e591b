//! Hypergeometric solutions of recurrences (Petkovšek's method).
//!
//! A hypergeometric solution of `sum_i p_i(n) y(n+i) = 0` has a ratio
//!
//! ```text
//! y(n+1)/y(n) = z * a(n)/b(n) * c(n+1)/c(n)
//! ```
//!
//! with monic `a | p_0(n)`, `b | p_d(n-d+1)` and a polynomial `c`. For each
//! pair `(a, b)`, `z` is a root of the leading-coefficient equation and `c` a
//! polynomial solution of `sum_i z^i P_i(n) c(n+i) = 0`, where
//! `P_i(n) = p_i(n) a(n)...a(n+i-1) b(n+i)...b(n+d-1)`.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::operators::RecOp;
use crate::poly::{falling_factorial, Polynomial, Var};
use crate::ratfun::RationalFunction;
use crate::scalar::{self, Scalar};
use crate::solvers::verify::ratio_residual;
use crate::solvers::{SolveReport, SolverConfig};

/// `y(n+1)/y(n)` of a hypergeometric solution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypergeometricCertificate {
    pub ratio: RationalFunction,
}

impl HypergeometricCertificate {
    fn sort_key(&self) -> (Vec<Scalar>, Vec<Scalar>) {
        (self.ratio.num().coeffs().to_vec(), self.ratio.den().coeffs().to_vec())
    }
}

impl Ord for HypergeometricCertificate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for HypergeometricCertificate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn hyper_solutions(rec: &RecOp) -> Result<Vec<HypergeometricCertificate>> {
    Ok(hyper_solutions_with(rec, &SolverConfig::default())?.solutions)
}

pub fn hyper_solutions_with(
    rec: &RecOp,
    config: &SolverConfig,
) -> Result<SolveReport<HypergeometricCertificate>> {
    if !rec.is_homogeneous() {
        return Err(Error::UnsupportedInput(
            "hypergeometric solutions need a homogeneous recurrence".into(),
        ));
    }
    let rec = rec.shift_normalized();
    let d = rec.order();
    if d == 0 {
        return Err(Error::UnsupportedInput(
            "a recurrence of order zero has only the zero solution".into(),
        ));
    }
    let mut bounds_hit = Vec::new();
    let a_cands = monic_divisors(&rec.coeff(0), config.max_factor_degree, &mut bounds_hit, "trailing")?;
    let b_cands = monic_divisors(
        &rec.coeff(d).shift(-(d as i64 - 1)),
        config.max_factor_degree,
        &mut bounds_hit,
        "leading",
    )?;

    let mut found: Vec<HypergeometricCertificate> = Vec::new();
    for a in &a_cands {
        for b in &b_cands {
            for ratio in ratios_for(&rec, a, b)? {
                let cert = HypergeometricCertificate { ratio };
                if !found.contains(&cert) {
                    if !ratio_residual(&rec, &cert.ratio)?.is_zero() {
                        return Err(Error::InvariantViolation(format!(
                            "candidate ratio {} failed verification",
                            cert.ratio
                        )));
                    }
                    found.push(cert);
                }
            }
        }
    }
    found.sort();
    Ok(SolveReport {
        solutions: found,
        bounds_hit,
    })
}

fn ratios_for(rec: &RecOp, a: &Polynomial, b: &Polynomial) -> Result<Vec<RationalFunction>> {
    let d = rec.order();
    let big_p: Vec<Polynomial> = (0..=d)
        .map(|i| {
            let mut p = rec.coeff(i);
            for j in 0..i {
                p = &p * &a.shift(j as i64);
            }
            for j in i..d {
                p = &p * &b.shift(j as i64);
            }
            p
        })
        .collect();
    let m = big_p.iter().filter_map(Polynomial::degree).max().expect("nonzero operator");
    let z_poly = Polynomial::new(
        big_p
            .iter()
            .map(|p| if p.degree() == Some(m) { p.leading_coeff() } else { Scalar::zero() })
            .collect(),
        Var::N,
    );
    let mut out = Vec::new();
    for (z, _) in z_poly.rational_roots()? {
        if z.is_zero() {
            continue;
        }
        let q: Vec<Polynomial> = big_p
            .iter()
            .enumerate()
            .map(|(i, p)| p.scale(&num_traits::pow(z.clone(), i)))
            .collect();
        for c in polynomial_solutions(&q)? {
            let num = &a.scale(&z) * &c.shift(1);
            let den = b * &c;
            out.push(RationalFunction::new(num, den)?);
        }
    }
    Ok(out)
}

/// Basis of the polynomial solutions `c` of `sum_i q_i(n) c(n+i) = 0`.
pub(crate) fn polynomial_solutions(q: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(bound) = degree_bound(q)? else {
        return Ok(Vec::new());
    };
    let columns: Vec<Polynomial> = (0..=bound)
        .map(|t| {
            q.iter().enumerate().fold(Polynomial::zero(Var::N), |acc, (i, qi)| {
                &acc + &(qi * &Polynomial::new(vec![scalar::int(i as i64), scalar::int(1)], Var::N).pow(t as u32))
            })
        })
        .collect();
    let rows_len = columns.iter().filter_map(Polynomial::degree).max().map_or(0, |d| d + 1);
    let rows: Vec<Vec<Scalar>> = (0..rows_len)
        .map(|k| columns.iter().map(|c| c.coeff(k)).collect())
        .collect();
    Ok(nullspace(rows, bound + 1)
        .into_iter()
        .map(|v| Polynomial::new(v, Var::N).monic())
        .collect())
}

/// Largest possible degree of a polynomial solution, or `None` if there is
/// none. Rewrites the operator as `sum_j r_j(n) Δ^j` and reads the degree off
/// the indicial equation of its dominant terms.
fn degree_bound(q: &[Polynomial]) -> Result<Option<usize>> {
    let r: Vec<Polynomial> = (0..q.len())
        .map(|j| {
            (j..q.len()).fold(Polynomial::zero(Var::N), |acc, i| {
                let c = Scalar::from_integer(scalar::binomial(i as u64, j as u64));
                &acc + &q[i].scale(&c)
            })
        })
        .collect();
    let b = r
        .iter()
        .enumerate()
        .filter_map(|(j, p)| p.degree().map(|deg| deg as i64 - j as i64))
        .max()
        .expect("nonzero operator");
    let mut indicial = Polynomial::zero(Var::N);
    for (j, p) in r.iter().enumerate() {
        if p.degree().map(|deg| deg as i64 - j as i64) == Some(b) {
            indicial = &indicial + &falling_factorial(0, j as i64)?.scale(&p.leading_coeff());
        }
    }
    let mut bound = -b - 1;
    if !indicial.is_zero() {
        for (root, _) in indicial.rational_roots()? {
            if root.is_integer() {
                bound = bound.max(root.to_integer().try_into().unwrap_or(i64::MAX));
            }
        }
    }
    Ok((bound >= 0).then_some(bound as usize))
}

/// Monic divisors of `p` built from its rational linear factors and, as one
/// block, the remaining factor. Divisors above `max_degree` are dropped with
/// a note.
fn monic_divisors(
    p: &Polynomial,
    max_degree: usize,
    notes: &mut Vec<String>,
    which: &str,
) -> Result<Vec<Polynomial>> {
    let roots = p.rational_roots()?;
    let mut rest = p.monic();
    for (r, m) in &roots {
        let lin = Polynomial::new(vec![-r.clone(), scalar::int(1)], Var::N);
        rest = rest.exact_div(&lin.pow(*m as u32))?;
    }
    let mut divisors = vec![Polynomial::one(Var::N)];
    for (r, m) in &roots {
        let lin = Polynomial::new(vec![-r.clone(), scalar::int(1)], Var::N);
        let mut next = Vec::new();
        for d in &divisors {
            let mut f = d.clone();
            for _ in 0..=*m {
                next.push(f.clone());
                f = &f * &lin;
            }
        }
        divisors = next;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let with_rest: Vec<Polynomial> = divisors.iter().map(|d| d * &rest).collect();
        divisors.extend(with_rest);
    }
    let before = divisors.len();
    divisors.retain(|d| d.degree().unwrap_or(0) <= max_degree);
    if divisors.len() < before {
        notes.push(format!(
            "{} divisor(s) of the {which} coefficient above degree {max_degree} skipped",
            before - divisors.len()
        ));
    }
    Ok(divisors)
}
