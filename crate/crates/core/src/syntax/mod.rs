//! Reading and writing operators: a human-readable expression syntax and a
//! JSON form with exact coefficients.

pub mod json;
mod lexer;
pub mod parser;

pub use json::{from_json, from_json_str, to_json, OperatorJson};
pub use parser::{parse_operator, parse_operator_detailed, parse_polynomial, ParsedOperator};
