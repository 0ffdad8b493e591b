//! Rational solutions of linear differential equations.
//!
//! Poles of a rational solution lie among the roots of the leading
//! coefficient. At a root `α` the pole order is bounded by the negative
//! integer roots of the local indicial polynomial, and the degree at infinity
//! by the integer roots of the indicial polynomial there. Irrational roots are
//! handled together, as the roots of a squarefree factor `g`, by computing in
//! `Q[t]/(g)` and splitting `g` whenever a coefficient vanishes at only some
//! of its roots. With the denominator `Q` fixed, the numerator
//! solves a linear system.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::linalg::nullspace;
use crate::operators::DiffOp;
use crate::poly::{falling_factorial, Polynomial, Var};
use crate::ratfun::RationalFunction;
use crate::scalar::{self, Scalar};
use crate::solvers::verify::apply_diffop;
use crate::solvers::{SolveReport, SolverConfig};

/// A rational function annihilated by the operator, scaled so that its
/// numerator is monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSolution {
    pub value: RationalFunction,
}

pub fn rational_ode_solutions(ode: &DiffOp) -> Result<Vec<RationalSolution>> {
    Ok(rational_ode_solutions_with(ode, &SolverConfig::default())?.solutions)
}

pub fn rational_ode_solutions_with(
    ode: &DiffOp,
    config: &SolverConfig,
) -> Result<SolveReport<RationalSolution>> {
    let mut bounds_hit = Vec::new();
    let l = ode.order();
    let mut den = Polynomial::one(Var::X);
    for (alpha, _) in ode.leading_coeff().rational_roots()? {
        let e = pole_order_bound(ode, &alpha)?;
        if e > config.max_pole_order {
            bounds_hit.push(format!(
                "pole order at x = {} capped at {} (indicial bound {e})",
                scalar::format(&alpha),
                config.max_pole_order
            ));
        }
        let lin = Polynomial::new(vec![-alpha, Scalar::one()], Var::X);
        den = &den * &lin.pow(e.min(config.max_pole_order) as u32);
    }
    let mut rest = ode.leading_coeff().monic();
    for (alpha, m) in ode.leading_coeff().rational_roots()? {
        let lin = Polynomial::new(vec![-alpha, Scalar::one()], Var::X);
        rest = rest.exact_div(&lin.pow(m as u32))?;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let squarefree = rest.exact_div(&rest.gcd(&rest.derivative())?)?;
        for (g, e) in irrational_pole_bounds(ode, squarefree)? {
            if e > config.max_pole_order {
                bounds_hit.push(format!(
                    "pole order at the roots of {g} capped at {} (indicial bound {e})",
                    config.max_pole_order
                ));
            }
            den = &den * &g.pow(e.min(config.max_pole_order) as u32);
        }
    }

    let Some(t_max) = degree_at_infinity(ode)? else {
        return Ok(SolveReport {
            solutions: Vec::new(),
            bounds_hit,
        });
    };
    let den_deg = den.degree().unwrap_or(0) as i64;
    if den_deg + t_max < 0 {
        return Ok(SolveReport {
            solutions: Vec::new(),
            bounds_hit,
        });
    }
    let mut num_deg = (den_deg + t_max) as usize;
    if num_deg > config.max_numerator_degree {
        bounds_hit.push(format!(
            "numerator degree capped at {} (bound {num_deg})",
            config.max_numerator_degree
        ));
        num_deg = config.max_numerator_degree;
    }

    // L(x^t / Q) * Q^(l+1) = sum_j q_j N_j Q^(l-j), where
    // (x^t / Q)^(j) = N_j / Q^(j+1)
    let den_d = den.derivative();
    let columns: Vec<Polynomial> = (0..=num_deg)
        .map(|t| {
            let mut nj = Polynomial::monomial(Scalar::one(), t, Var::X);
            let mut acc = Polynomial::zero(Var::X);
            for (j, q) in ode.coeffs().iter().enumerate() {
                if j > 0 {
                    let prev = nj;
                    nj = &(&prev.derivative() * &den) - &(&prev * &den_d).scale(&scalar::int(j as i64));
                }
                acc = &acc + &(&(q * &nj) * &den.pow((l - j) as u32));
            }
            acc
        })
        .collect();
    let rows_len = columns.iter().filter_map(Polynomial::degree).max().map_or(0, |d| d + 1);
    let rows: Vec<Vec<Scalar>> = (0..rows_len)
        .map(|k| columns.iter().map(|c| c.coeff(k)).collect())
        .collect();

    let mut solutions = Vec::new();
    for v in nullspace(rows, num_deg + 1) {
        let value = RationalFunction::new(Polynomial::new(v, Var::X), den.clone())?.monic_numerator();
        if !apply_diffop(ode, &value)?.is_zero() {
            return Err(crate::error::Error::InvariantViolation(format!(
                "candidate solution {value} failed verification"
            )));
        }
        solutions.push(RationalSolution { value });
    }
    Ok(SolveReport {
        solutions,
        bounds_hit,
    })
}

/// Largest `e` such that `(x - α)^-e` may lead a solution's expansion at `α`.
fn pole_order_bound(ode: &DiffOp, alpha: &Scalar) -> Result<usize> {
    // coefficients in powers of (x - α): lowest power v_j and its coefficient
    let local: Vec<Option<(usize, Scalar)>> = ode
        .coeffs()
        .iter()
        .map(|q| {
            let s = q.shift_by(alpha);
            s.coeffs()
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .map(|(v, c)| (v, c.clone()))
        })
        .collect();
    // y ~ (x-α)^s: term j has order v_j + s - j
    let mu = local
        .iter()
        .enumerate()
        .filter_map(|(j, t)| t.as_ref().map(|(v, _)| *v as i64 - j as i64))
        .min()
        .expect("nonzero operator");
    let mut indicial = Polynomial::zero(Var::N);
    for (j, t) in local.iter().enumerate() {
        if let Some((v, c)) = t {
            if *v as i64 - j as i64 == mu {
                indicial = &indicial + &falling_factorial(0, j as i64)?.scale(c);
            }
        }
    }
    let mut e = 0usize;
    for (root, _) in indicial.rational_roots()? {
        if root.is_integer() && root < Scalar::zero() {
            let k: i64 = (-root.to_integer()).try_into().unwrap_or(i64::MAX);
            e = e.max(k as usize);
        }
    }
    Ok(e)
}

/// Negative indicial roots below this are not searched for at irrational
/// points.
const IRRATIONAL_SCAN: i64 = 64;

/// Pole-order bounds at the roots of the squarefree `g`, as pieces `(g_i, e_i)`
/// with `g = prod g_i`.
fn irrational_pole_bounds(ode: &DiffOp, g: Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    let mut pending = vec![g];
    let mut out = Vec::new();
    'factor: while let Some(g) = pending.pop() {
        // lowest nonvanishing Taylor coefficient of each q_j at t, modulo g
        let mut local: Vec<Option<(usize, Polynomial)>> = Vec::new();
        for q in ode.coeffs() {
            if q.is_zero() {
                local.push(None);
                continue;
            }
            let mut d = q.clone();
            let mut k = 0usize;
            loop {
                let c = d.div_rem(&g)?.1;
                if !c.is_zero() {
                    let h = c.gcd(&g)?;
                    if h.degree().unwrap_or(0) > 0 {
                        pending.push(g.exact_div(&h)?);
                        pending.push(h);
                        continue 'factor;
                    }
                    let kf = Scalar::from_integer(scalar::factorial(k as u64));
                    local.push(Some((k, c.scale(&kf.recip()))));
                    break;
                }
                d = d.derivative();
                k += 1;
            }
        }
        let mu = local
            .iter()
            .enumerate()
            .filter_map(|(j, t)| t.as_ref().map(|(v, _)| *v as i64 - j as i64))
            .min()
            .expect("nonzero operator");
        let mut e = 0usize;
        for s in 1..=IRRATIONAL_SCAN {
            let mut value = Polynomial::zero(Var::X);
            for (j, t) in local.iter().enumerate() {
                if let Some((v, c)) = t {
                    if *v as i64 - j as i64 == mu {
                        let ff = falling_factorial(0, j as i64)?.eval(&scalar::int(-s));
                        value = &value + &c.scale(&ff);
                    }
                }
            }
            let value = value.div_rem(&g)?.1;
            if value.is_zero() || value.gcd(&g)?.degree().unwrap_or(0) > 0 {
                e = s as usize;
            }
        }
        out.push((g, e));
    }
    Ok(out)
}

/// Largest integer `t` such that a solution may behave like `x^t` at
/// infinity, or `None` if no integer exponent is possible.
fn degree_at_infinity(ode: &DiffOp) -> Result<Option<i64>> {
    let mu = ode
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, q)| q.degree().map(|d| d as i64 - j as i64))
        .max()
        .expect("nonzero operator");
    let mut indicial = Polynomial::zero(Var::N);
    for (j, q) in ode.coeffs().iter().enumerate() {
        if q.degree().map(|d| d as i64 - j as i64) == Some(mu) {
            indicial = &indicial + &falling_factorial(0, j as i64)?.scale(&q.leading_coeff());
        }
    }
    Ok(indicial
        .rational_roots()?
        .into_iter()
        .filter(|(r, _)| r.is_integer())
        .map(|(r, _)| r.to_integer().try_into().unwrap_or(i64::MAX))
        .max())
}
