use std::fmt;

use crate::operators::BoundarySymbol;
use crate::poly::Var;

/// Errors raised by the algebra, the converters and the numeric oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: Var, found: Var },

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("the zero polynomial has no well-defined root set")]
    RootsOfZero,

    #[error("negative argument: {what} = {value}")]
    NegativeArgument { what: &'static str, value: i64 },

    #[error("zero operator: every coefficient vanishes")]
    ZeroOperator,

    #[error("sequence too short: need at least {needed} terms, got {got}")]
    SequenceTooShort { needed: usize, got: usize },

    #[error("missing numeric value for boundary symbol {0}")]
    MissingBoundaryValue(BoundarySymbol),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("degenerate relation: {0}")]
    DegenerateRelation(String),

    #[error("singular index {index}: leading coefficient vanishes and no initial value was supplied")]
    SingularIndex { index: usize },

    #[error("need {needed} initial coefficients before the recurrence determines the rest, got {got}")]
    InsufficientInitialValues { needed: usize, got: usize },

    #[error("initial values contradict the equation at x^{power}")]
    InconsistentInitialValues { power: usize },

    #[error("series oracle inapplicable: {0}")]
    OracleInapplicable(String),

    #[error("tolerance not reached: achieved bound {achieved:e} > requested {requested:e} after {terms} terms")]
    ToleranceNotReached {
        achieved: f64,
        requested: f64,
        terms: usize,
    },

    #[error("malformed candidate: {0}")]
    MalformedCandidate(String),

    #[error("{0}")]
    Parse(ParseError),

    #[error("invalid JSON operator: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax or lowering error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
