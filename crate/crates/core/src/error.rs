use std::fmt;

use thiserror::Error;

/// Located syntax error inside a polynomial or differential expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column inside the expression.
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { column, token: token.into(), message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {} (at `{}`)", self.column, self.message, self.token)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    Characteristic2,
    #[error("expected {expected} variables, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },
    #[error("monomial orders differ")]
    OrderMismatch,
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("syntax error: {0}")]
    Parse(#[from] ParseError),
    #[error("generator {index} (`{generator}`) is inhomogeneous: `{first}` has degree {first_degree} but `{second}` has degree {second_degree}")]
    Inhomogeneous {
        index: usize,
        generator: String,
        first: String,
        first_degree: u32,
        second: String,
        second_degree: u32,
    },
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("duplicate or invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("DG algebras belong to different specs")]
    SpecMismatch,
    #[error("invalid DG algebra: {0}")]
    InvalidSpec(String),
    #[error(
        "size budget exhausted in stage {stage}: bidegree ({hdeg},{ideg}) needs {size} basis elements (limit {limit})"
    )]
    WindowExhausted { stage: u32, hdeg: u32, ideg: u32, size: usize, limit: usize },
    #[error("internal degree {requested} is beyond the precomputed range {available}")]
    BeyondTable { requested: u32, available: u32 },
    #[error("no lift for variable {variable} in bidegree ({hdeg},{ideg}): the maps do not commute")]
    NoLift { variable: String, hdeg: u32, ideg: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
