//! Sums, products and intersections of ideals, and Hilbert functions of quotients.

use crate::error::Error;

use super::groebner::{groebner_basis, GroebnerIdeal};
use super::monomial::{monomials_of_degree, MonomialOrder};
use super::polynomial::Polynomial;

fn same_ring(a: &GroebnerIdeal, b: &GroebnerIdeal) -> Result<(), Error> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableCountMismatch { expected: a.nvars(), found: b.nvars() });
    }
    if a.order() != b.order() {
        return Err(Error::OrderMismatch);
    }
    Ok(())
}

fn from_gens(gens: Vec<Polynomial>, like: &GroebnerIdeal) -> Result<GroebnerIdeal, Error> {
    if gens.iter().all(|g| g.is_zero()) {
        return Ok(GroebnerIdeal::zero(like.nvars(), like.order(), like.field()));
    }
    groebner_basis(&gens, like.order())
}

pub fn ideal_sum(a: &GroebnerIdeal, b: &GroebnerIdeal) -> Result<GroebnerIdeal, Error> {
    same_ring(a, b)?;
    let gens = a.basis().iter().chain(b.basis()).cloned().collect();
    from_gens(gens, a)
}

pub fn ideal_product(a: &GroebnerIdeal, b: &GroebnerIdeal) -> Result<GroebnerIdeal, Error> {
    same_ring(a, b)?;
    let mut gens = Vec::new();
    for f in a.basis() {
        for g in b.basis() {
            gens.push(f.mul(g));
        }
    }
    from_gens(gens, a)
}

/// `a ∩ b` by eliminating an auxiliary variable `t` from `t·a + (1 - t)·b`.
pub fn ideal_intersection(a: &GroebnerIdeal, b: &GroebnerIdeal) -> Result<GroebnerIdeal, Error> {
    same_ring(a, b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(GroebnerIdeal::zero(a.nvars(), a.order(), a.field()));
    }
    let n = a.nvars();
    let field = a.field();
    let elim = MonomialOrder::Elimination { block: 1 };
    let t = Polynomial::variable(n + 1, 0, elim, field);
    let one_minus_t = Polynomial::constant(n + 1, elim, field.one()).sub(&t);
    let mut gens = Vec::new();
    for f in a.basis() {
        gens.push(f.prepend_variables(&[1], elim));
    }
    for g in b.basis() {
        gens.push(g.prepend_variables(&[0], elim).mul(&one_minus_t));
    }
    let big = groebner_basis(&gens, elim)?;
    let kept: Vec<Polynomial> = big
        .basis()
        .iter()
        .filter(|p| !p.uses_leading_variables(1))
        .map(|p| p.drop_leading_variables(1, a.order()))
        .collect();
    let result = from_gens(kept, a)?;
    for g in result.basis() {
        if !a.contains(g)? || !b.contains(g)? {
            return Err(Error::Internal(format!("intersection generator {g:?} escapes an input ideal")));
        }
    }
    Ok(result)
}

/// `dim_k (k[x]/J)_d` for `0 <= d <= d_max`, by counting monomials outside the
/// leading-term ideal.
pub fn hilbert_function_of(ideal: &GroebnerIdeal, d_max: u32) -> Vec<u64> {
    let leads = ideal.leading_monomials();
    (0..=d_max)
        .map(|d| {
            monomials_of_degree(ideal.nvars(), d).iter().filter(|m| !leads.iter().any(|l| l.divides(m))).count() as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::parse::parse_polynomial;

    fn ideal(srcs: &[&str], vars: &[&str]) -> GroebnerIdeal {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens: Vec<Polynomial> =
            srcs.iter().map(|s| parse_polynomial(s, &v, Field::Rational, MonomialOrder::DegRevLex).unwrap()).collect();
        groebner_basis(&gens, MonomialOrder::DegRevLex).unwrap()
    }

    fn render(i: &GroebnerIdeal, vars: &[&str]) -> Vec<String> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        i.basis().iter().map(|p| p.render(&v)).collect()
    }

    #[test]
    fn intersections_of_principal_ideals() {
        let v = ["x", "y"];
        assert_eq!(render(&ideal_intersection(&ideal(&["x"], &v), &ideal(&["x"], &v)).unwrap(), &v), vec!["x"]);
        assert_eq!(render(&ideal_intersection(&ideal(&["x"], &v), &ideal(&["y"], &v)).unwrap(), &v), vec!["x*y"]);
        assert_eq!(
            render(&ideal_intersection(&ideal(&["x^2"], &v), &ideal(&["y^2"], &v)).unwrap(), &v),
            vec!["x^2*y^2"]
        );
    }

    #[test]
    fn intersection_of_non_monomial_ideals() {
        // (x + y) ∩ (x - y) = (x^2 - y^2) since the generators are coprime.
        let v = ["x", "y"];
        let i = ideal_intersection(&ideal(&["x + y"], &v), &ideal(&["x - y"], &v)).unwrap();
        assert_eq!(render(&i, &v), vec!["x^2 - y^2"]);
    }

    #[test]
    fn hilbert_functions() {
        assert_eq!(hilbert_function_of(&ideal(&["x^2", "y^2"], &["x", "y"]), 4), vec![1, 2, 1, 0, 0]);
        assert_eq!(hilbert_function_of(&ideal(&["x*y"], &["x", "y"]), 3), vec![1, 2, 2, 2]);
        let zero = GroebnerIdeal::zero(1, MonomialOrder::DegRevLex, Field::Rational);
        assert_eq!(hilbert_function_of(&zero, 3), vec![1, 1, 1, 1]);
    }
}
