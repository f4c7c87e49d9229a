//! Buchberger's algorithm with Gebauer–Möller pair elimination.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::field::Field;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;

/// An ideal together with its reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerIdeal {
    nvars: usize,
    order: MonomialOrder,
    field: Field,
    generators: Vec<Polynomial>,
    basis: Vec<Polynomial>,
    graded: bool,
}

impl GroebnerIdeal {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    /// True when every generator is homogeneous.
    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().filter_map(|g| g.leading_monomial().cloned()).collect()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, Error> {
        Ok(normal_form(f, self)?.is_zero())
    }

    /// Ideal equality via the canonical reduced bases.
    pub fn same_ideal(&self, other: &GroebnerIdeal) -> bool {
        self.nvars == other.nvars && self.order == other.order && self.basis == other.basis
    }

    /// The zero ideal of the ring.
    pub fn zero(nvars: usize, order: MonomialOrder, field: Field) -> GroebnerIdeal {
        GroebnerIdeal { nvars, order, field, generators: Vec::new(), basis: Vec::new(), graded: true }
    }
}

/// Remainder of `f` modulo the reduced basis of `ideal`.
pub fn normal_form(f: &Polynomial, ideal: &GroebnerIdeal) -> Result<Polynomial, Error> {
    if f.nvars() != ideal.nvars {
        return Err(Error::VariableCountMismatch { expected: ideal.nvars, found: f.nvars() });
    }
    let f = if f.order() == ideal.order { f.clone() } else { f.with_order(ideal.order) };
    Ok(reduce(&f, &ideal.basis.iter().collect::<Vec<_>>()))
}

pub(crate) fn reduce(f: &Polynomial, basis: &[&Polynomial]) -> Polynomial {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, crate::field::Scalar)> = Vec::new();
    while let Some((m, c)) = p.terms().first().cloned() {
        let divisor = basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            Some(g) => {
                let lm = g.leading_monomial().expect("nonzero");
                let q = lm.quotient(&m).expect("divides");
                let coef = c.checked_div(g.leading_coefficient().expect("nonzero")).expect("field");
                p = p.sub(&g.mul_term(&q, &coef));
            }
            None => {
                rem.push((m.clone(), c.clone()));
                p = p.sub(&Polynomial::monomial(m, c, p.order()));
            }
        }
    }
    Polynomial::from_terms(f.nvars(), f.order(), f.field(), rem)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg);
    let a = f.leading_coefficient().unwrap().inverse().unwrap();
    let b = g.leading_coefficient().unwrap().inverse().unwrap();
    f.mul_term(&lf.quotient(&l).unwrap(), &a).sub(&g.mul_term(&lg.quotient(&l).unwrap(), &b))
}

struct Pairs {
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    pairs: BTreeSet<(u32, usize, usize)>,
}

impl Pairs {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().expect("nonzero")
    }

    fn lcm(&self, i: usize, j: usize) -> Monomial {
        self.lm(i).lcm(self.lm(j))
    }

    /// Gebauer–Möller update for the new element `h`.
    fn update(&mut self, h_poly: Polynomial) {
        let h = self.polys.len();
        self.polys.push(h_poly);
        self.active.push(true);
        let lh = self.lm(h).clone();

        let mut remaining: Vec<usize> = (0..h).filter(|&g| self.active[g]).collect();
        let mut kept: Vec<usize> = Vec::new();
        while !remaining.is_empty() {
            let g1 = remaining.remove(0);
            let l1 = self.lcm(h, g1);
            let coprime = lh.is_coprime(self.lm(g1));
            let dominated = remaining.iter().chain(kept.iter()).any(|&g2| self.lcm(h, g2).divides(&l1));
            if coprime || !dominated {
                kept.push(g1);
            }
        }
        let new_pairs: Vec<usize> = kept.into_iter().filter(|&g| !lh.is_coprime(self.lm(g))).collect();

        let old: Vec<(u32, usize, usize)> = self.pairs.iter().cloned().collect();
        for (d, a, b) in old {
            let l = self.lcm(a, b);
            if lh.divides(&l) && self.lcm(a, h) != l && self.lcm(b, h) != l {
                self.pairs.remove(&(d, a, b));
            }
        }
        for g in new_pairs {
            let d = self.lcm(g, h).degree();
            self.pairs.insert((d, g, h));
        }
        for g in 0..h {
            if self.active[g] && lh.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn active_basis(&self) -> Vec<&Polynomial> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
pub fn groebner_basis(gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerIdeal, Error> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let (nvars, field) = (first.nvars(), first.field());
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::VariableCountMismatch { expected: nvars, found: g.nvars() });
        }
    }
    let graded = gens.iter().all(|g| g.is_zero() || g.homogeneous_degree().is_some());
    let mut state = Pairs { polys: Vec::new(), active: Vec::new(), pairs: BTreeSet::new() };
    let mut inputs: Vec<Polynomial> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| g.with_order(order).monic()).collect();
    inputs.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for f in inputs {
        let h = reduce(&f, &state.active_basis());
        if !h.is_zero() {
            state.update(h.monic());
        }
    }
    while let Some(p) = state.pairs.iter().next().cloned() {
        state.pairs.remove(&p);
        let s = s_polynomial(&state.polys[p.1], &state.polys[p.2]);
        let h = reduce(&s, &state.active_basis());
        if !h.is_zero() {
            state.update(h.monic());
        }
    }
    let basis = interreduce(state.active_basis().into_iter().cloned().collect(), order);
    Ok(GroebnerIdeal { nvars, order, field, generators: gens.to_vec(), basis, graded })
}

fn interreduce(mut g: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    g.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in g {
        let lm = p.leading_monomial().unwrap();
        if !minimal.iter().any(|q| q.leading_monomial().unwrap().divides(lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Polynomial> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
        out.push(reduce(&minimal[i], &others).monic());
    }
    out.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn polys(srcs: &[&str], vars: &[&str]) -> Vec<Polynomial> {
        let v = names(vars);
        srcs.iter().map(|s| parse_polynomial(s, &v, Field::Rational, MonomialOrder::DegRevLex).unwrap()).collect()
    }

    fn render(ideal: &GroebnerIdeal, vars: &[&str]) -> Vec<String> {
        ideal.basis().iter().map(|p| p.render(&names(vars))).collect()
    }

    #[test]
    fn single_variable() {
        let g = groebner_basis(&polys(&["x"], &["x"]), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(render(&g, &["x"]), vec!["x"]);
    }

    #[test]
    fn monomial_ideals_are_their_own_bases() {
        let v = ["x", "y"];
        let g = groebner_basis(&polys(&["x^2", "x*y"], &v), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(render(&g, &v), vec!["x^2", "x*y"]);
        let g = groebner_basis(&polys(&["x*y", "y^2"], &v), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(render(&g, &v), vec!["x*y", "y^2"]);
    }

    #[test]
    fn normal_form_examples() {
        let v = ["x", "y"];
        let g = groebner_basis(&polys(&["x^2"], &v), MonomialOrder::DegRevLex).unwrap();
        let f = &polys(&["x^2*y + y^3"], &v)[0];
        assert_eq!(normal_form(f, &g).unwrap().render(&names(&v)), "y^3");
        let one = groebner_basis(&polys(&["x^2"], &["x"]), MonomialOrder::DegRevLex).unwrap();
        assert!(normal_form(&polys(&["x^2"], &["x"])[0], &one).unwrap().is_zero());
    }

    #[test]
    fn normal_form_by_hand_division() {
        // Basis {x^2 - y*z, x*y - z^2, y^2 - x*z} (degrevlex x > y > z); by hand:
        //   x^2*y - x*y^2 - y*(x^2 - y*z)  = -x*y^2 + y^2*z
        //   ... + y*(x*y - z^2)            =  y^2*z - y*z^2
        //   ... - z*(y^2 - x*z)            =  x*z^2 - y*z^2   (no term divisible)
        let v = ["x", "y", "z"];
        let g = groebner_basis(&polys(&["x^2 - y*z", "x*y - z^2", "y^2 - x*z"], &v), MonomialOrder::DegRevLex).unwrap();
        let f = &polys(&["x^2*y - x*y^2"], &v)[0];
        assert_eq!(normal_form(f, &g).unwrap().render(&names(&v)), "x*z^2 - y*z^2");
    }

    #[test]
    fn mismatched_arity_is_rejected() {
        let g = groebner_basis(&polys(&["x"], &["x"]), MonomialOrder::DegRevLex).unwrap();
        let f = &polys(&["x*y"], &["x", "y"])[0];
        assert!(matches!(normal_form(f, &g), Err(Error::VariableCountMismatch { .. })));
        assert!(matches!(groebner_basis(&[], MonomialOrder::DegRevLex), Err(Error::EmptyGenerators)));
    }

    #[test]
    fn basis_is_idempotent_and_order_independent() {
        let v = ["x", "y", "z"];
        let a = groebner_basis(&polys(&["x^2 - y*z", "x*y - z^2", "y^2 - x*z"], &v), MonomialOrder::DegRevLex).unwrap();
        let b = groebner_basis(a.basis(), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(a.basis(), b.basis());
        let c = groebner_basis(&polys(&["y^2 - x*z", "x^2 - y*z", "x*y - z^2"], &v), MonomialOrder::DegRevLex).unwrap();
        assert!(a.same_ideal(&c));
    }
}
