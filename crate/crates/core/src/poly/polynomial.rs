use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::field::{Field, Scalar};

use super::monomial::{Monomial, MonomialOrder};

/// A multivariate polynomial with terms sorted in descending order and no
/// zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    order: MonomialOrder,
    field: Field,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(nvars: usize, order: MonomialOrder, field: Field) -> Self {
        Polynomial { nvars, order, field, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Scalar) -> Self {
        Self::monomial(Monomial::one(nvars), c, order)
    }

    pub fn monomial(m: Monomial, c: Scalar, order: MonomialOrder) -> Self {
        let field = c.field();
        let nvars = m.nvars();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { nvars, order, field, terms }
    }

    pub fn variable(nvars: usize, i: usize, order: MonomialOrder, field: Field) -> Self {
        Self::monomial(Monomial::variable(nvars, i), field.one(), order)
    }

    /// Builds a polynomial from arbitrary terms, combining like monomials.
    pub fn from_terms(nvars: usize, order: MonomialOrder, field: Field, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, order, field, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    /// Common total degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    /// First pair of terms of different degree, for error reporting.
    pub fn inhomogeneous_witness(&self) -> Option<(&Monomial, &Monomial)> {
        let first = &self.terms.first()?.0;
        self.terms.iter().find(|(m, _)| m.degree() != first.degree()).map(|(m, _)| (first, m))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn check_compatible(&self, other: &Polynomial) -> Result<(), Error> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: other.nvars });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch);
        }
        Ok(())
    }

    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        Polynomial::from_terms(self.nvars, order, self.field, self.terms.clone())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.lin_comb(&self.field.one(), other, &self.field.one())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.lin_comb(&self.field.one(), other, &-&self.field.one())
    }

    /// `a*self + b*other`, merging the sorted term lists.
    pub fn lin_comb(&self, a: &Scalar, other: &Polynomial, b: &Scalar) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(x), Some(y)) => self.order.cmp(&x.0, &y.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    let c = a * &self.terms[i].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                }
                Ordering::Less => {
                    let c = b * &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((other.terms[j].0.clone(), c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &(a * &self.terms[i].1) + &(b * &other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, order: self.order, field: self.field, terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.order, self.field);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { terms, ..self.clone_shape() }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-&self.field.one())
    }

    /// Multiplication by `c * m`; monomial orders are multiplicative so the
    /// term order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.order, self.field);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Polynomial { terms, ..self.clone_shape() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.nvars, self.order, self.field);
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, self.order, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient().and_then(|c| c.inverse()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Embeds into a ring with `lead.len()` new leading variables, multiplying by the
    /// monomial with exponents `lead`.
    pub(crate) fn prepend_variables(&self, lead: &[u16], order: MonomialOrder) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.prepend(lead), c.clone())).collect();
        Polynomial::from_terms(self.nvars + lead.len(), order, self.field, terms)
    }

    /// Drops `k` leading variables that do not occur.
    pub(crate) fn drop_leading_variables(&self, k: usize, order: MonomialOrder) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.drop_leading(k), c.clone())).collect();
        Polynomial::from_terms(self.nvars - k, order, self.field, terms)
    }

    pub(crate) fn uses_leading_variables(&self, k: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[..k].iter().any(|&e| e > 0))
    }

    fn clone_shape(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, order: self.order, field: self.field, terms: Vec::new() }
    }

    /// Renders in the input syntax, e.g. `x^2*y - 3*y^3`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&render_term(&abs, &m.render(names), m.is_one()));
        }
        out
    }
}

pub(crate) fn render_term(abs: &Scalar, body: &str, body_is_one: bool) -> String {
    if body_is_one {
        abs.to_string()
    } else if abs.is_one() {
        body.to_string()
    } else {
        format!("{abs}*{body}")
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(i: usize) -> Polynomial {
        Polynomial::variable(2, i, MonomialOrder::DegRevLex, Field::Rational)
    }

    #[test]
    fn arithmetic_cancels_and_sorts() {
        let (x, y) = (var(0), var(1));
        let p = x.add(&y).mul(&x.sub(&y));
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.render(&names), "x^2 - y^2");
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(x.add(&y.pow(2)).homogeneous_degree(), None);
    }
}
