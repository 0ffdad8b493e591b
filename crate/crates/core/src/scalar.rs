//! The coefficient field: arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p` or `p/q`.
pub fn format(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q` with optional sign; returns `None` on anything else.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Positive rational `c` such that every value divided by `c` is an integer and
/// the resulting integers are coprime. Returns one for an all-zero input.
pub fn content<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    let values: Vec<&Scalar> = values.into_iter().filter(|v| !v.is_zero()).collect();
    for v in &values {
        den_lcm = den_lcm.lcm(v.denom());
    }
    for v in &values {
        let scaled = v.numer() * (&den_lcm / v.denom());
        num_gcd = num_gcd.gcd(&scaled.abs());
    }
    if num_gcd.is_zero() {
        return Scalar::one();
    }
    Scalar::new(num_gcd, den_lcm)
}
