//! JSON form of a DG algebra: variables with bidegrees and kinds, differentials
//! as expressions in the base and adjoined variables (`g(v,i)` for `v^(i)`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError};
use crate::poly::parse::{evaluate, field_number, parse_expr, Evaluator, Expr};
use crate::poly::Monomial;
use crate::presentation::{validate_presentation, RawPresentation};

use super::algebra::{DgAlgebra, DgElement, ExtensionKind};
use super::word::{VarKind, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgVariableDoc {
    pub name: String,
    pub hdeg: u32,
    pub ideg: u32,
    pub kind: VarKind,
    pub differential: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgSpecDoc {
    pub base: RawPresentation,
    pub kind: ExtensionKind,
    pub variables: Vec<DgVariableDoc>,
}

impl DgSpecDoc {
    pub fn from_algebra(alg: &DgAlgebra) -> DgSpecDoc {
        DgSpecDoc {
            base: alg.base().to_raw(),
            kind: alg.kind(),
            variables: alg
                .variables()
                .iter()
                .map(|v| DgVariableDoc {
                    name: v.name.clone(),
                    hdeg: v.hdeg,
                    ideg: v.ideg,
                    kind: v.kind,
                    differential: alg.render(alg.differential_of(v.index)),
                })
                .collect(),
        }
    }

    /// Rebuilds the algebra, valid up to internal degree `max_ideg` (at least
    /// the largest variable degree), and checks `d^2 = 0`.
    pub fn to_algebra(&self, max_ideg: u32) -> Result<DgAlgebra, Error> {
        let base = Arc::new(validate_presentation(&self.base)?);
        let top = self.variables.iter().map(|v| v.ideg).max().unwrap_or(0).max(max_ideg);
        let mut alg = DgAlgebra::new(base, self.kind, top)?;
        for v in &self.variables {
            let d = parse_dg_element(&alg, &v.differential)?;
            alg.add_variable(v.name.clone(), v.hdeg, v.ideg, v.kind, d)?;
        }
        alg.check_square_zero()?;
        Ok(alg)
    }
}

struct DgEval<'a> {
    alg: &'a DgAlgebra,
}

impl DgEval<'_> {
    fn dg_variable(&self, name: &str) -> Option<usize> {
        self.alg.variables().iter().position(|v| v.name == name)
    }
}

impl Evaluator for DgEval<'_> {
    type Value = DgElement;

    fn number(&self, num: &BigInt, den: &BigInt, column: usize) -> Result<DgElement, ParseError> {
        let c = field_number(self.alg.field(), num, den, column)?;
        Ok(self.alg.term(Word::empty(), Monomial::one(self.alg.base().nvars()), c))
    }

    fn ident(&self, name: &str, column: usize) -> Result<DgElement, ParseError> {
        let n = self.alg.base().nvars();
        if let Some(i) = self.alg.base().vars().iter().position(|v| v == name) {
            let mut e = self.alg.zero();
            for (k, c) in self.alg.tables().normal_form_monomial(&Monomial::variable(n, i)) {
                e = e.add(&self.alg.term(Word::empty(), self.alg.tables().basis(1)[k].clone(), c));
            }
            return Ok(e);
        }
        match self.dg_variable(name) {
            Some(v) => Ok(self.alg.variable(v)),
            None => Err(ParseError::new(column, name, "unknown variable")),
        }
    }

    fn call(&self, name: &str, args: &[Expr], column: usize) -> Result<DgElement, ParseError> {
        if name != "g" || args.len() != 2 {
            return Err(ParseError::new(column, name, "only g(v,i) is allowed"));
        }
        let (var, var_col) = match &args[0] {
            Expr::Ident { name, column } => (self.dg_variable(name), *column),
            _ => (None, column),
        };
        let Some(v) = var.filter(|&v| self.alg.variables()[v].kind == VarKind::Divided) else {
            return Err(ParseError::new(var_col, format!("{:?}", args[0]), "g(v,i) needs a divided-power variable"));
        };
        let i = match &args[1] {
            Expr::Number { num, den, .. } if *den == BigInt::from(1) => num.to_u32(),
            _ => None,
        };
        let Some(i) = i else {
            return Err(ParseError::new(column, "g", "the exponent of g(v,i) must be a nonnegative integer"));
        };
        let n = self.alg.base().nvars();
        Ok(self.alg.term(Word::single(v, i), Monomial::one(n), self.alg.field().one()))
    }

    fn add(&self, a: DgElement, b: DgElement) -> DgElement {
        a.add(&b)
    }

    fn sub(&self, a: DgElement, b: DgElement) -> DgElement {
        a.sub(&b)
    }

    fn mul(&self, a: DgElement, b: DgElement) -> DgElement {
        self.alg.mul(&a, &b)
    }

    fn neg(&self, a: DgElement) -> DgElement {
        a.scale(&-&self.alg.field().one())
    }

    fn pow(&self, a: DgElement, e: u32) -> DgElement {
        let mut out = self.alg.one();
        for _ in 0..e {
            out = self.alg.mul(&out, &a);
        }
        out
    }
}

/// Parses an element of `alg` written in the polynomial syntax over the base
/// and adjoined variables.
pub fn parse_dg_element(alg: &DgAlgebra, src: &str) -> Result<DgElement, Error> {
    let expr = parse_expr(src)?;
    Ok(evaluate(&DgEval { alg }, &expr)?)
}
