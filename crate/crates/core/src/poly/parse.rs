//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insignificant, juxtaposition rejected):
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | ident ('(' expr (',' expr)* ')')? | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, ParseError};
use crate::field::{Field, Scalar};

use super::monomial::MonomialOrder;
use super::polynomial::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number { num: BigInt, den: BigInt, column: usize },
    Ident { name: String, column: usize },
    Call { name: String, args: Vec<Expr>, column: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct Lexer;

impl Lexer {
    fn run(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let chars: Vec<char> = src.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((Tok::Num(text.parse().expect("digits")), column));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), column));
            } else if "+-*^/(),".contains(c) {
                out.push((Tok::Op(c), column));
                i += 1;
            } else {
                return Err(ParseError::new(column, c.to_string(), "unexpected character"));
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_column)
    }

    fn token_text(&self) -> String {
        match self.peek() {
            Some(Tok::Num(n)) => n.to_string(),
            Some(Tok::Ident(s)) => s.clone(),
            Some(Tok::Op(c)) => c.to_string(),
            None => "<end>".to_string(),
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.column(), self.token_text(), message)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                match self.peek() {
                    Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                        return Err(self.error("juxtaposition is not allowed; use '*'"));
                    }
                    _ => return Ok(lhs),
                }
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(self.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Tok::Num(num)) => {
                self.pos += 1;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(den)) if !den.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Number { num, den, column })
                        }
                        _ => Err(self.error("expected a nonzero integer denominator")),
                    }
                } else {
                    Ok(Expr::Number { num, den: BigInt::one(), column })
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    Ok(Expr::Call { name, args, column })
                } else {
                    Ok(Expr::Ident { name, column })
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::run(src)?;
    let end_column = src.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end_column };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(e)
}

/// Interpretation of expression trees in some algebra.
pub trait Evaluator {
    type Value;
    fn number(&self, num: &BigInt, den: &BigInt, column: usize) -> Result<Self::Value, ParseError>;
    fn ident(&self, name: &str, column: usize) -> Result<Self::Value, ParseError>;
    fn call(&self, name: &str, args: &[Expr], column: usize) -> Result<Self::Value, ParseError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn pow(&self, a: Self::Value, e: u32) -> Self::Value;
}

pub fn evaluate<E: Evaluator>(ev: &E, e: &Expr) -> Result<E::Value, ParseError> {
    Ok(match e {
        Expr::Number { num, den, column } => ev.number(num, den, *column)?,
        Expr::Ident { name, column } => ev.ident(name, *column)?,
        Expr::Call { name, args, column } => ev.call(name, args, *column)?,
        Expr::Add(a, b) => ev.add(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Sub(a, b) => ev.sub(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Mul(a, b) => ev.mul(evaluate(ev, a)?, evaluate(ev, b)?),
        Expr::Neg(a) => ev.neg(evaluate(ev, a)?),
        Expr::Pow(a, k) => ev.pow(evaluate(ev, a)?, *k),
    })
}

pub(crate) fn field_number(field: Field, num: &BigInt, den: &BigInt, column: usize) -> Result<Scalar, ParseError> {
    field
        .from_ratio(num, den)
        .ok_or_else(|| ParseError::new(column, format!("{num}/{den}"), "denominator vanishes in the field"))
}

struct PolyEval<'a> {
    names: &'a [String],
    field: Field,
    order: MonomialOrder,
}

impl Evaluator for PolyEval<'_> {
    type Value = Polynomial;

    fn number(&self, num: &BigInt, den: &BigInt, column: usize) -> Result<Polynomial, ParseError> {
        let c = field_number(self.field, num, den, column)?;
        Ok(Polynomial::constant(self.names.len(), self.order, c))
    }

    fn ident(&self, name: &str, column: usize) -> Result<Polynomial, ParseError> {
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok(Polynomial::variable(self.names.len(), i, self.order, self.field)),
            None => Err(ParseError::new(column, name.to_string(), "unknown variable")),
        }
    }

    fn call(&self, name: &str, _: &[Expr], column: usize) -> Result<Polynomial, ParseError> {
        Err(ParseError::new(column, name.to_string(), "function calls are not allowed here"))
    }

    fn add(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        a.add(&b)
    }
    fn sub(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        a.sub(&b)
    }
    fn mul(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        a.mul(&b)
    }
    fn neg(&self, a: Polynomial) -> Polynomial {
        a.neg()
    }
    fn pow(&self, a: Polynomial, e: u32) -> Polynomial {
        a.pow(e)
    }
}

/// Parses a polynomial over `field` in the variables `names`.
pub fn parse_polynomial(src: &str, names: &[String], field: Field, order: MonomialOrder) -> Result<Polynomial, Error> {
    let expr = parse_expr(src)?;
    Ok(evaluate(&PolyEval { names, field, order }, &expr)?)
}
