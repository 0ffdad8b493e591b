//! Operator expressions.
//!
//! ```text
//! equation := sum ["=" sum]
//! sum      := product (("+" | "-") product)*
//! product  := unary (("*" | "/") unary)*
//! unary    := ("-" | "+") unary | power
//! power    := atom ["^" integer]
//! atom     := number | "x" | "n" | "Dx" | "S" | "(" sum ")"
//!           | "f" | "f(x)" | "f'(x)" | "f''(x)" | "f^(j)(x)"
//!           | "f(n)" | "f(n+i)" | "M(n+i)"           shifted values
//!           | "f(1)" | "f'(1)" | "f^(j)(1)" | "M(k)"  boundary symbols
//! ```
//!
//! An expression denotes an operator applied to an implicit `f`: a bare
//! coefficient `q` stands for `q*f`, and `Dx`, `S` compose to the right as in
//! the Ore algebra (`Dx*x = x*Dx + 1`, `S*n = (n+1)*S`). Written values such
//! as `f'(x)` or `f(n+1)` accept only constant factors on their right.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, ParseError, Result};
use crate::operators::{BoundarySymbol, DiffOp, InhomPart, Operator, RecOp};
use crate::poly::{Polynomial, Var};
use crate::ratfun::RationalFunction;
use crate::scalar::{self, Scalar};
use crate::syntax::lexer::{tokenize, Tok, Token};

/// `D(0)` is the identity; `S(0)` is always stored as `D(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    D(u32),
    S(i64),
    B(BoundarySymbol),
}

fn compose(a: Key, b: Key) -> Option<Key> {
    let s = |i: i64| if i == 0 { Key::D(0) } else { Key::S(i) };
    match (a, b) {
        (Key::D(i), Key::D(j)) => Some(Key::D(i + j)),
        (Key::S(i), Key::S(j)) => Some(s(i + j)),
        (Key::D(0), Key::S(j)) => Some(Key::S(j)),
        (Key::S(i), Key::D(0)) => Some(Key::S(i)),
        _ => None,
    }
}

#[derive(Clone, Debug)]
struct Value {
    terms: BTreeMap<Key, RationalFunction>,
    /// Contains an operator atom or a written value of `f`.
    atom: bool,
    /// Contains a written value of `f`, so nothing may act on its right.
    applied: bool,
}

impl Value {
    fn coefficient(c: RationalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Key::D(0), c);
        }
        Value {
            terms,
            atom: false,
            applied: false,
        }
    }

    fn scalar(c: Scalar) -> Self {
        Self::coefficient(RationalFunction::constant(c, Var::X))
    }

    fn atom(key: Key, applied: bool) -> Self {
        Value {
            terms: BTreeMap::from([(key, RationalFunction::one(Var::X))]),
            atom: true,
            applied,
        }
    }

    /// The coefficient of a value without atoms.
    fn as_coefficient(&self) -> RationalFunction {
        self.terms
            .get(&Key::D(0))
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(Var::X))
    }

    fn add_term(&mut self, key: Key, c: RationalFunction) -> Result<()> {
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    fn add(mut self, other: Value) -> Result<Value> {
        for (k, c) in other.terms {
            self.add_term(k, c)?;
        }
        self.atom |= other.atom;
        self.applied |= other.applied;
        Ok(self)
    }

    fn scale(mut self, c: &RationalFunction) -> Result<Value> {
        let mut terms = BTreeMap::new();
        for (k, v) in std::mem::take(&mut self.terms) {
            let p = v.mul(c)?;
            if !p.is_zero() {
                terms.insert(k, p);
            }
        }
        self.terms = terms;
        Ok(self)
    }

    fn neg(self) -> Result<Value> {
        self.scale(&RationalFunction::constant(-Scalar::one(), Var::X))
    }
}

/// A lowered operator together with the polynomial the input was multiplied
/// by to clear denominators (one if there were none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedOperator {
    pub op: Operator,
    pub multiplier: Polynomial,
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    Ok(parse_operator_detailed(text)?.op)
}

pub fn parse_operator_detailed(text: &str) -> Result<ParsedOperator> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        hints: Hints::default(),
    };
    let value = p.equation()?;
    p.lower(value)
}

/// A polynomial in `var` such as `2*n^2 - 1/3`, as used for JSON
/// coefficients.
pub fn parse_polynomial(text: &str, var: Var) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        hints: Hints::default(),
    };
    let value = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(err_at(p.here(), format!("unexpected {}", p.peek().describe())));
    }
    let (wrong, name) = match var {
        Var::X => (p.hints.n, "n"),
        Var::N => (p.hints.x, "x"),
    };
    if let Some(pos) = wrong {
        return Err(err_at(pos, format!("`{name}` cannot appear in a polynomial in {var}")));
    }
    if value.atom {
        return Err(err_at((1, 1), "expected a polynomial, found an operator"));
    }
    let c = value.as_coefficient();
    if !c.is_polynomial() {
        return Err(err_at((1, 1), "expected a polynomial, found a quotient"));
    }
    Ok(c.num().clone().with_var(var))
}

type Pos = (usize, usize);

#[derive(Default)]
struct Hints {
    x: Option<Pos>,
    n: Option<Pos>,
    diff: Option<Pos>,
    rec: Option<Pos>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    hints: Hints,
}

fn err_at(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        line: pos.0,
        column: pos.1,
        message: message.into(),
    })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn here(&self) -> Pos {
        let t = &self.tokens[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(err_at(
                self.here(),
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
            ))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let pos = self.here();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump().tok {
            Tok::Num(v) if v.is_integer() => {
                let i: i64 = v
                    .to_integer()
                    .try_into()
                    .map_err(|_| err_at(pos, "integer out of range"))?;
                Ok(if negative { -i } else { i })
            }
            other => Err(err_at(pos, format!("expected an integer, found {}", other.describe()))),
        }
    }

    fn equation(&mut self) -> Result<Value> {
        let lhs = self.sum()?;
        let value = if *self.peek() == Tok::Equals {
            self.bump();
            let rhs = self.sum()?;
            lhs.add(rhs.neg()?)?
        } else {
            lhs
        };
        if *self.peek() != Tok::End {
            return Err(err_at(
                self.here(),
                format!("unexpected {}", self.peek().describe()),
            ));
        }
        Ok(value)
    }

    fn sum(&mut self) -> Result<Value> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.product()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(self.product()?.neg()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.here();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = multiply(acc, rhs, pos)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    if rhs.atom {
                        return Err(err_at(pos, "only coefficients can be divided by"));
                    }
                    let c = rhs.as_coefficient();
                    if c.is_zero() {
                        return Err(err_at(pos, "division by zero"));
                    }
                    acc = acc.scale(&RationalFunction::one(Var::X).div(&c)?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                self.unary()?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.here();
        self.bump();
        let e = if *self.peek() == Tok::LParen {
            self.bump();
            let e = self.integer()?;
            self.expect(Tok::RParen)?;
            e
        } else {
            self.integer()?
        };
        if e < 0 {
            return Err(err_at(pos, "negative exponents are not supported; divide instead"));
        }
        let mut acc = Value::scalar(Scalar::one());
        for _ in 0..e {
            acc = multiply(acc, base.clone(), pos)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value> {
        let pos = self.here();
        let tok = self.bump();
        match tok.tok {
            Tok::Num(v) => Ok(Value::scalar(v)),
            Tok::LParen => {
                let v = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.hints.x.get_or_insert(pos);
                    Ok(Value::coefficient(RationalFunction::from_poly(Polynomial::identity(Var::X))))
                }
                "n" => {
                    self.hints.n.get_or_insert(pos);
                    Ok(Value::coefficient(RationalFunction::from_poly(Polynomial::identity(Var::X))))
                }
                "Dx" => {
                    self.hints.diff.get_or_insert(pos);
                    Ok(Value::atom(Key::D(1), false))
                }
                "S" => {
                    self.hints.rec.get_or_insert(pos);
                    Ok(Value::atom(Key::S(1), false))
                }
                "f" => self.function_atom(pos),
                "M" => {
                    self.expect(Tok::LParen)?;
                    let v = self.argument(0, pos, true)?;
                    self.expect(Tok::RParen)?;
                    Ok(v)
                }
                _ => Err(err_at(pos, format!("unknown identifier `{name}`"))),
            },
            other => Err(err_at(pos, format!("unexpected {}", other.describe()))),
        }
    }

    /// After `f`: derivative marks, then an optional argument.
    fn function_atom(&mut self, pos: Pos) -> Result<Value> {
        let mut order = 0u32;
        let mut marked = false;
        if *self.peek() == Tok::Caret && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let j = self.integer()?;
            self.expect(Tok::RParen)?;
            order = u32::try_from(j).map_err(|_| err_at(pos, "derivative order must be nonnegative"))?;
            marked = true;
        } else {
            while *self.peek() == Tok::Tick {
                self.bump();
                order += 1;
                marked = true;
            }
        }
        if *self.peek() != Tok::LParen {
            if marked {
                self.hints.diff.get_or_insert(pos);
            }
            return Ok(Value::atom(Key::D(order), true));
        }
        self.bump();
        let v = self.argument(order, pos, false)?;
        self.expect(Tok::RParen)?;
        Ok(v)
    }

    /// The argument of `f^(order)(...)` or, with `moment`, of `M(...)`.
    fn argument(&mut self, order: u32, pos: Pos, moment: bool) -> Result<Value> {
        let apos = self.here();
        match self.peek().clone() {
            Tok::Ident(v) if v == "x" && !moment => {
                self.bump();
                self.hints.diff.get_or_insert(pos);
                Ok(Value::atom(Key::D(order), true))
            }
            Tok::Ident(v) if v == "n" => {
                self.bump();
                if order > 0 {
                    return Err(err_at(pos, "derivatives of sequence values are not supported"));
                }
                let shift = match self.peek() {
                    Tok::Plus => {
                        self.bump();
                        self.integer()?
                    }
                    Tok::Minus => {
                        self.bump();
                        -self.integer()?
                    }
                    _ => 0,
                };
                self.hints.rec.get_or_insert(pos);
                let key = if shift == 0 { Key::D(0) } else { Key::S(shift) };
                Ok(Value::atom(key, true))
            }
            Tok::Num(_) => {
                let k = self.integer()?;
                self.hints.rec.get_or_insert(pos);
                if moment {
                    let k = u32::try_from(k).map_err(|_| err_at(apos, "moment index must be nonnegative"))?;
                    Ok(Value::atom(Key::B(BoundarySymbol::MellinMoment(k)), true))
                } else if k == 1 {
                    Ok(Value::atom(Key::B(BoundarySymbol::DerivAtOne(order)), true))
                } else {
                    Err(err_at(apos, "only values at x = 1 can appear as boundary symbols"))
                }
            }
            other => Err(err_at(apos, format!("unexpected {} in argument", other.describe()))),
        }
    }

    fn lower(&self, value: Value) -> Result<ParsedOperator> {
        let has_d = value.terms.keys().any(|k| matches!(k, Key::D(j) if *j > 0));
        let has_rec_key = value.terms.keys().any(|k| matches!(k, Key::S(_) | Key::B(_)));
        let diff = self.hints.diff.filter(|_| has_d || !has_rec_key);
        let rec = self.hints.rec;
        let is_diff = match (diff.or(has_d.then_some((1, 1))), rec.or(has_rec_key.then_some((1, 1)))) {
            (Some(_), Some(r)) => {
                return Err(err_at(r, "mixed operator: Dx and S (or x- and n-values) in one expression"))
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => match (self.hints.x, self.hints.n) {
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some(_), Some(p)) => return Err(err_at(p, "both x and n appear")),
                (None, None) => {
                    return Err(err_at(
                        (1, 1),
                        "cannot tell a differential from a recurrence operator; use Dx, S, x or n",
                    ))
                }
            },
        };
        if is_diff {
            if let Some(p) = self.hints.n {
                return Err(err_at(p, "n cannot appear in a differential operator"));
            }
        } else if let Some(p) = self.hints.x {
            return Err(err_at(p, "x cannot appear in a recurrence"));
        }

        let mut multiplier = Polynomial::one(Var::X);
        for c in value.terms.values() {
            multiplier = multiplier.lcm(c.den())?;
        }
        let var = if is_diff { Var::X } else { Var::N };
        let poly = |c: &RationalFunction| -> Result<Polynomial> {
            let p = c.num().try_mul(&multiplier.exact_div(c.den())?)?;
            Ok(p.with_var(var))
        };
        let op = if is_diff {
            let top = value
                .terms
                .keys()
                .map(|k| match k {
                    Key::D(j) => *j as usize,
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            let mut coeffs = vec![Polynomial::zero(Var::X); top + 1];
            for (k, c) in &value.terms {
                match k {
                    Key::D(j) => coeffs[*j as usize] = poly(c)?,
                    _ => unreachable!("recurrence keys rejected above"),
                }
            }
            Operator::Diff(DiffOp::new(coeffs)?)
        } else {
            let mut shifts = BTreeMap::new();
            let mut inhom = InhomPart::new();
            for (k, c) in &value.terms {
                match k {
                    Key::D(0) => {
                        shifts.insert(0, poly(c)?);
                    }
                    Key::S(i) => {
                        shifts.insert(*i, poly(c)?);
                    }
                    Key::B(sym) => inhom.add_term(*sym, &poly(c)?)?,
                    Key::D(_) => unreachable!("differential keys rejected above"),
                }
            }
            Operator::Rec(RecOp::from_shifts(&shifts, inhom)?)
        };
        Ok(ParsedOperator {
            op,
            multiplier: multiplier.with_var(var),
        })
    }
}

/// `lhs * rhs` in the Ore algebra.
fn multiply(lhs: Value, rhs: Value, pos: Pos) -> Result<Value> {
    if !lhs.atom {
        let c = lhs.as_coefficient();
        return rhs.scale(&c);
    }
    if lhs.applied || rhs.terms.keys().any(|k| matches!(k, Key::B(_))) {
        let c = rhs.as_coefficient();
        if rhs.atom || !c.is_polynomial() || c.num().degree().unwrap_or(0) > 0 {
            return Err(err_at(
                pos,
                "only constants may multiply a value of f from the right; write coefficients on the left",
            ));
        }
        return lhs.scale(&c);
    }
    let mut out = Value {
        terms: BTreeMap::new(),
        atom: true,
        applied: rhs.applied,
    };
    for (k1, c1) in &lhs.terms {
        for (k2, c2) in &rhs.terms {
            // move k1 past the coefficient c2
            let moved: Vec<(Key, RationalFunction)> = match k1 {
                Key::D(a) => {
                    let mut v = Vec::new();
                    let mut deriv = c2.clone();
                    for i in 0..=*a {
                        let binom = Scalar::from_integer(scalar::binomial(*a as u64, i as u64));
                        if !deriv.is_zero() {
                            v.push((Key::D(a - i), deriv.scale(&binom)));
                        }
                        deriv = deriv.derivative();
                    }
                    v
                }
                Key::S(i) => vec![(Key::S(*i), c2.shift(*i))],
                Key::B(_) => unreachable!("boundary symbols are applied values"),
            };
            for (k, c) in moved {
                let key = compose(k, *k2)
                    .ok_or_else(|| err_at(pos, "mixed operator: Dx and S cannot be combined"))?;
                out.add_term(key, c1.mul(&c)?)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::X)
    }
    fn pn(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::N)
    }
    fn diff(text: &str) -> DiffOp {
        match parse_operator(text).unwrap() {
            Operator::Diff(d) => d,
            other => panic!("expected a differential operator, got {other}"),
        }
    }
    fn rec(text: &str) -> RecOp {
        match parse_operator(text).unwrap() {
            Operator::Rec(r) => r,
            other => panic!("expected a recurrence, got {other}"),
        }
    }
    fn parse_err(text: &str) -> ParseError {
        match parse_operator(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn section_two_operator() {
        let d = diff("(x-3)*Dx + 2*(x^2-1)*Dx^2");
        assert_eq!(d.coeffs(), &[px(&[]), px(&[-3, 1]), px(&[-2, 0, 2])]);
        let written = diff("(-3+x) f'(x)+2 (-1+x) (1+x) f''(x)=0".replace(") f", ")*f").replace(") (", ")*(").replace("2 (", "2*(").as_str());
        assert_eq!(written, d);
    }

    #[test]
    fn first_example_recurrence() {
        let r = rec("(2+n)*S^2 - S - (n+1)");
        assert_eq!(r.coeffs(), &[pn(&[-1, -1]), pn(&[-1]), pn(&[2, 1])]);
        assert_eq!(r, rec("(2+n)*f(n+2) - f(n+1) - (n+1)*f(n) = 0"));
        assert_eq!(r, rec("(2+n)*M(n+2) - M(n+1) - (n+1)*M(n)"));
    }

    #[test]
    fn negative_shifts_are_reindexed() {
        let r = rec("(n+1)*(2*n+3)*M(n) + 3*n*M(n-1) - 2*(n-1)*n*M(n-2) = 6*f(1)");
        assert_eq!(r.order(), 2);
        assert_eq!(r.coeff(1), pn(&[6, 3]));
        assert_eq!(r.inhom().get(&BoundarySymbol::DerivAtOne(0)), Some(&pn(&[-6])));
    }

    #[test]
    fn ore_composition() {
        // Dx*x = x*Dx + 1
        assert_eq!(diff("Dx*x"), DiffOp::new(vec![px(&[1]), px(&[0, 1])]).unwrap());
        // S*n = (n+1)*S
        assert_eq!(rec("S*n - 1"), RecOp::homogeneous(vec![pn(&[-1]), pn(&[1, 1])]).unwrap());
        assert_eq!(diff("Dx*Dx - 1"), diff("Dx^2 - 1"));
        assert_eq!(diff("Dx*f"), diff("f'(x)"));
        assert_eq!(diff("f^(3)(x) + f"), diff("Dx^3 + 1"));
    }

    #[test]
    fn denominators_are_cleared() {
        let p = parse_operator_detailed("Dx + 1/(x+1)").unwrap();
        assert_eq!(p.multiplier, px(&[1, 1]));
        assert_eq!(p.op, Operator::Diff(DiffOp::new(vec![px(&[1]), px(&[1, 1])]).unwrap()));
        let p = parse_operator_detailed("1/2*Dx + x").unwrap();
        assert_eq!(p.multiplier, px(&[1]));
    }

    #[test]
    fn boundary_symbols() {
        let r = rec("M(n+1) - M(n) + 2*f^(1)(1) - f'(1) + M(0)");
        assert_eq!(r.inhom().len(), 2);
        assert_eq!(r.inhom().get(&BoundarySymbol::DerivAtOne(1)), Some(&pn(&[1])));
        assert_eq!(r.inhom().get(&BoundarySymbol::MellinMoment(0)), Some(&pn(&[1])));
    }

    #[test]
    fn rejections() {
        assert!(parse_err("Dx*S").message.contains("mixed"));
        assert!(parse_err("x*S").message.contains("x cannot"));
        assert!(parse_err("n*Dx").message.contains("n cannot"));
        assert!(parse_err("2 + 3").message.contains("cannot tell"));
        assert!(parse_err("f(x)*x").message.contains("only constants"));
        assert!(parse_err("Dx/Dx").message.contains("divided"));
        let e = parse_err("x +\n  * Dx");
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_err("(x + 1");
        assert!(e.message.contains("expected `)`"));
        assert!(matches!(parse_operator("Dx - Dx"), Err(Error::ZeroOperator)));
        assert!(parse_err("f(2)").message.contains("x = 1"));
        assert!(parse_err("y*Dx").message.contains("unknown identifier"));
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_polynomial("2*n^2 - 1/3", Var::N).unwrap().coeffs()[0], scalar::rat(-1, 3));
        assert_eq!(parse_polynomial("0", Var::X).unwrap(), px(&[]));
        assert!(parse_polynomial("x", Var::N).is_err());
        assert!(parse_polynomial("1/x", Var::X).is_err());
        assert!(parse_polynomial("Dx", Var::X).is_err());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "(x - 1)*Dx + 1",
            "-(x^3 - x)*Dx - (x^2 + x)",
            "(n + 2)*S^2 - S - (n + 1)",
            "(2*n + 7)*(n + 3)*S^2",
            "1/2*x^2*Dx^2 - 3/4",
        ] {
            let op = parse_operator(text).unwrap();
            assert_eq!(parse_operator(&op.to_string()).unwrap(), op, "{text}");
        }
    }
}
