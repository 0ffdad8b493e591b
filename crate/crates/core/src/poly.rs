//! Dense univariate polynomials over the rationals.
//!
//! A [`Polynomial`] carries a variable tag ([`Var::X`] for the function side,
//! [`Var::N`] for the sequence side). The checked operations (`try_add`,
//! [`poly_arith`], [`Polynomial::gcd`], ...) reject mixed tags with
//! [`Error::VariableMismatch`]; the `std::ops` impls are for code that has
//! already established a common variable and panic on a mismatch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// The name of a polynomial's indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The continuous variable of a differential operator.
    X,
    /// The discrete variable of a recurrence operator.
    N,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::N => "n",
        })
    }
}

/// Coefficient list indexed by exponent, leading zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
    var: Var,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation on two polynomials in the same variable.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<Scalar>, var: Var) -> Self {
        let mut p = Polynomial { coeffs, var };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| scalar::int(c)).collect(), var)
    }

    pub fn zero(var: Var) -> Self {
        Polynomial {
            coeffs: Vec::new(),
            var,
        }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(Scalar::one(), var)
    }

    pub fn constant(c: Scalar, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// `c * var^deg`
    pub fn monomial(c: Scalar, deg: usize, var: Var) -> Self {
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs, var)
    }

    /// The polynomial `var` itself.
    pub fn identity(var: Var) -> Self {
        Self::monomial(Scalar::one(), 1, var)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Same coefficients, different variable tag.
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    fn check_var(&self, other: &Polynomial) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                expected: self.var,
                found: other.var,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(Polynomial::new(coeffs, self.var))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Ok(Polynomial::new(coeffs, self.var))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.var));
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Polynomial::new(coeffs, self.var))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    /// Multiplies by `var^k`.
    pub fn shl(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial::new(coeffs, self.var)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.var);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * at + c)
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * at + scalar::to_f64(c))
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * scalar::int(i as i64))
            .collect();
        Polynomial::new(coeffs, self.var)
    }

    /// `p(var + k)`, computed by Horner's rule in the shifted variable.
    pub fn shift(&self, k: i64) -> Polynomial {
        self.shift_by(&scalar::int(k))
    }

    pub fn shift_by(&self, k: &Scalar) -> Polynomial {
        let lin = Polynomial::new(vec![k.clone(), Scalar::one()], self.var);
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(self.var), |acc, c| {
                &(&acc * &lin) + &Polynomial::constant(c.clone(), self.var)
            })
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_var(divisor)?;
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let d_lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Polynomial::zero(self.var), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - d_deg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d_deg] / &d_lc;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(d_deg);
        Ok((Polynomial::new(quot, self.var), Polynomial::new(rem, self.var)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            // keep intermediate coefficients small
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Monic least common multiple; the zero polynomial if either input is zero.
    pub fn lcm(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.is_zero() || other.is_zero() {
            self.check_var(other)?;
            return Ok(Polynomial::zero(self.var));
        }
        let g = self.gcd(other)?;
        Ok(self.try_mul(other)?.exact_div(&g)?.monic())
    }

    /// Splits off the rational content: `self = content * primitive` where the
    /// primitive part has coprime integer coefficients and a positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> (Scalar, Polynomial) {
        if self.is_zero() {
            return (Scalar::one(), self.clone());
        }
        let mut c = scalar::content(self.coeffs.iter());
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    /// Rational roots with multiplicities, in increasing order.
    pub fn rational_roots(&self) -> Result<Vec<(Scalar, usize)>> {
        if self.is_zero() {
            return Err(Error::RootsOfZero);
        }
        let (_, mut p) = self.primitive_part();
        let mut roots = Vec::new();

        let zero_mult = p.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zero_mult > 0 {
            roots.push((Scalar::zero(), zero_mult));
            p = Polynomial::new(p.coeffs[zero_mult..].to_vec(), p.var);
        }
        if p.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        let a0 = p.coeff(0).numer().abs();
        let an = p.leading_coeff().numer().abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        let mut candidates: Vec<Scalar> = Vec::new();
        for q in &den_divs {
            for d in &num_divs {
                let r = Scalar::new(d.clone(), q.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            let lin = Polynomial::new(vec![-r.clone(), Scalar::one()], p.var);
            let mut mult = 0;
            while p.degree().unwrap_or(0) > 0 && p.eval(&r).is_zero() {
                p = p.exact_div(&lin)?;
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(roots)
    }
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `(n + offset)(n + offset - 1) ... (n + offset - length + 1)`, a polynomial in
/// `n` of degree `length`; one for `length = 0`.
pub fn falling_factorial(offset: i64, length: i64) -> Result<Polynomial> {
    if length < 0 {
        return Err(Error::NegativeArgument {
            what: "length",
            value: length,
        });
    }
    let mut acc = Polynomial::one(Var::N);
    for t in 0..length {
        let factor = Polynomial::new(vec![scalar::int(offset - t), Scalar::one()], Var::N);
        acc = &acc * &factor;
    }
    Ok(acc)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial variable mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial variable mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial variable mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect(), self.var)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Descending powers, e.g. `2*x^3 - x + 1/2`. The output re-parses to the same
/// polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let abs = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            if mono.is_empty() {
                f.write_str(&scalar::format(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", scalar::format(&abs), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn px(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::X)
    }
    fn pn(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::N)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(
            poly_arith(&px(&[1, 1]), &px(&[-1, 1]), ArithOp::Mul).unwrap(),
            px(&[-1, 0, 1])
        );
        let sum = poly_arith(&px(&[2, -1, -1]), &px(&[-2, 1, 1]), ArithOp::Add).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.coeffs().len(), 0);
        assert_eq!(
            poly_arith(&pn(&[1, 1]), &pn(&[2, 1]), ArithOp::Mul).unwrap(),
            pn(&[2, 3, 1])
        );
    }

    #[test]
    fn mixed_variables_are_rejected() {
        let err = poly_arith(&px(&[1]), &pn(&[1]), ArithOp::Add).unwrap_err();
        assert_eq!(
            err,
            Error::VariableMismatch {
                expected: Var::X,
                found: Var::N
            }
        );
        assert!(px(&[1]).gcd(&pn(&[1])).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(px(&[-1, 0, 1]).gcd(&px(&[-1, 1])).unwrap(), px(&[-1, 1]));
        assert_eq!(px(&[0, 1]).gcd(&px(&[1, 1])).unwrap(), px(&[1]));
        assert_eq!(px(&[2, 2]).gcd(&px(&[4, 4])).unwrap(), px(&[1, 1]));
        assert_eq!(px(&[]).gcd(&px(&[]).clone()), Err(Error::GcdOfZeros));
        assert_eq!(px(&[]).gcd(&px(&[0, 3])).unwrap(), px(&[0, 1]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(pn(&[0, 0, 1]).shift(1), pn(&[1, 2, 1]));
        assert_eq!(pn(&[3, 1]).shift(-3), pn(&[0, 1]));
        assert_eq!(pn(&[5]).shift(7), pn(&[5]));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(3, 2).unwrap(), pn(&[6, 5, 1]));
        assert_eq!(falling_factorial(0, 0).unwrap(), pn(&[1]));
        assert_eq!(falling_factorial(1, 3).unwrap(), pn(&[0, -1, 0, 1]));
        assert!(matches!(
            falling_factorial(0, -1),
            Err(Error::NegativeArgument { .. })
        ));
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(
            px(&[0, 1, 0, -1]).rational_roots().unwrap(),
            vec![(int(-1), 1), (int(0), 1), (int(1), 1)]
        );
        assert!(px(&[1, 0, 1]).rational_roots().unwrap().is_empty());
        assert_eq!(px(&[4, 4, 1]).rational_roots().unwrap(), vec![(int(-2), 2)]);
        assert_eq!(
            px(&[-1, 2]).scale(&rat(1, 3)).rational_roots().unwrap(),
            vec![(rat(1, 2), 1)]
        );
        assert_eq!(px(&[]).rational_roots(), Err(Error::RootsOfZero));
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(px(&[0, 1, 0, -1]).to_string(), "-x^3 + x");
        assert_eq!(
            Polynomial::new(vec![rat(1, 2), int(0), int(-2)], Var::N).to_string(),
            "-2*n^2 + 1/2"
        );
        assert_eq!(px(&[]).to_string(), "0");
    }

    #[test]
    fn primitive_part_normalizes_sign_and_content() {
        let p = Polynomial::new(vec![rat(-1, 2), rat(-3, 4)], Var::X);
        let (c, q) = p.primitive_part();
        assert_eq!(c, rat(-1, 4));
        assert_eq!(q, px(&[2, 3]));
    }
}
