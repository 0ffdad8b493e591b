use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Var};
use crate::scalar::Scalar;

/// A reduced quotient `num / den` with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.var() != den.var() {
            return Err(Error::VariableMismatch {
                expected: num.var(),
                found: den.var(),
            });
        }
        if num.is_zero() {
            return Ok(Self::zero(num.var()));
        }
        let g = num.gcd(&den)?;
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let lc = den.leading_coeff().recip();
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let var = p.var();
        RationalFunction {
            num: p,
            den: Polynomial::one(var),
        }
    }

    pub fn zero(var: Var) -> Self {
        Self::from_poly(Polynomial::zero(var))
    }

    pub fn one(var: Var) -> Self {
        Self::from_poly(Polynomial::one(var))
    }

    pub fn constant(c: Scalar, var: Var) -> Self {
        Self::from_poly(Polynomial::constant(c, var))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn var(&self) -> Var {
        self.num.var()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn with_var(self, var: Var) -> Self {
        RationalFunction {
            num: self.num.with_var(var),
            den: self.den.with_var(var),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = self
            .num
            .try_mul(&other.den)?
            .try_add(&other.num.try_mul(&self.den)?)?;
        Self::new(num, self.den.try_mul(&other.den)?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.try_mul(&other.den)?, self.den.try_mul(&other.num)?)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.var());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// `r(var + k)`
    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.num.shift(k), self.den.shift(k)).expect("nonzero denominator")
    }

    pub fn eval(&self, at: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        self.num.eval_f64(at) / self.den.eval_f64(at)
    }

    /// Scales so that the numerator is monic (denominator stays monic).
    pub fn monic_numerator(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.num.leading_coeff().recip())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let terms = |p: &Polynomial| p.coeffs().iter().filter(|c| !c.is_zero()).count();
        if terms(&self.num) > 1 {
            write!(f, "({})/", self.num)?;
        } else {
            write!(f, "{}/", self.num)?;
        }
        let single_monic = terms(&self.den) == 1 && self.den.leading_coeff().is_one();
        if single_monic {
            write!(f, "{}", self.den)
        } else {
            write!(f, "({})", self.den)
        }
    }
}
