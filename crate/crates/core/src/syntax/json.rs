//! The JSON form of an operator:
//!
//! ```text
//! {"kind": "diffop" | "recop", "var": "x" | "n",
//!  "coeffs": ["<poly>", ...],
//!  "inhom": [{"symbol": "f^(j)(1)" | "M(k)", "coeff": "<poly in n>"}, ...]}
//! ```
//!
//! Coefficients are exact polynomial strings, lowest order first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{BoundarySymbol, DiffOp, InhomPart, Operator, RecOp};
use crate::poly::{Polynomial, Var};
use crate::syntax::parser::parse_polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Diffop,
    Recop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InhomTerm {
    pub symbol: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kind: OperatorKind,
    pub var: String,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inhom: Vec<InhomTerm>,
}

impl OperatorJson {
    pub fn from_operator(op: &Operator) -> Self {
        let strings = |ps: &[Polynomial]| ps.iter().map(|p| p.to_string()).collect();
        match op {
            Operator::Diff(d) => OperatorJson {
                kind: OperatorKind::Diffop,
                var: "x".into(),
                coeffs: strings(d.coeffs()),
                inhom: Vec::new(),
            },
            Operator::Rec(r) => OperatorJson {
                kind: OperatorKind::Recop,
                var: "n".into(),
                coeffs: strings(r.coeffs()),
                inhom: r
                    .inhom()
                    .iter()
                    .map(|(sym, p)| InhomTerm {
                        symbol: sym.to_string(),
                        coeff: p.to_string(),
                    })
                    .collect(),
            },
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let expected = match self.kind {
            OperatorKind::Diffop => "x",
            OperatorKind::Recop => "n",
        };
        if self.var != expected {
            return Err(Error::Json(format!(
                "a {} uses the variable {expected}, not `{}`",
                match self.kind {
                    OperatorKind::Diffop => "diffop",
                    OperatorKind::Recop => "recop",
                },
                self.var
            )));
        }
        let poly = |s: &str, var: Var| {
            parse_polynomial(s, var).map_err(|e| Error::Json(format!("coefficient `{s}`: {e}")))
        };
        match self.kind {
            OperatorKind::Diffop => {
                if !self.inhom.is_empty() {
                    return Err(Error::Json("a diffop has no boundary terms".into()));
                }
                let coeffs = self.coeffs.iter().map(|s| poly(s, Var::X)).collect::<Result<_>>()?;
                Ok(Operator::Diff(DiffOp::new(coeffs)?))
            }
            OperatorKind::Recop => {
                let coeffs = self.coeffs.iter().map(|s| poly(s, Var::N)).collect::<Result<_>>()?;
                let mut inhom = InhomPart::new();
                for t in &self.inhom {
                    let sym: BoundarySymbol = t.symbol.parse()?;
                    inhom.add_term(sym, &poly(&t.coeff, Var::N)?)?;
                }
                Ok(Operator::Rec(RecOp::new(coeffs, inhom)?))
            }
        }
    }
}

pub fn to_json(op: &Operator) -> serde_json::Value {
    serde_json::to_value(OperatorJson::from_operator(op)).expect("plain data serializes")
}

pub fn from_json(value: &serde_json::Value) -> Result<Operator> {
    let parsed: OperatorJson =
        serde_json::from_value(value.clone()).map_err(|e| Error::Json(e.to_string()))?;
    parsed.to_operator()
}

pub fn from_json_str(text: &str) -> Result<Operator> {
    let parsed: OperatorJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    parsed.to_operator()
}
