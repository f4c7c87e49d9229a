//! Graded presentations `k[x_1..x_n]/I`, the surjections between them, and
//! per-degree multiplication tables for their normal monomials.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::linalg::{sparse_from_entries, SparseVec};
use crate::poly::{
    groebner_basis, hilbert_function_of, ideal_intersection, ideal_sum, monomials_of_degree, normal_form,
    parse_polynomial, GroebnerIdeal, Monomial, MonomialOrder, Polynomial,
};

pub const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

/// Unvalidated presentation data, as read from input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPresentation {
    pub field: Field,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
}

/// A standard graded connected algebra `k[vars]/I` with `I` homogeneous.
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    field: Field,
    vars: Vec<String>,
    ideal: GroebnerIdeal,
    minimal: bool,
}

impl PartialEq for GradedPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.ideal.same_ideal(&other.ideal)
    }
}

fn check_names(vars: &[String]) -> Result<(), Error> {
    for (i, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_')
            && v != "g";
        if !ok || vars[..i].contains(v) {
            return Err(Error::BadVariableName(v.clone()));
        }
    }
    Ok(())
}

fn check_generator(index: usize, g: &Polynomial, vars: &[String]) -> Result<u32, Error> {
    if g.is_zero() {
        return Err(Error::ZeroGenerator(index));
    }
    if let Some((a, b)) = g.inhomogeneous_witness() {
        return Err(Error::Inhomogeneous {
            index,
            generator: g.render(vars),
            first: a.render(vars),
            first_degree: a.degree(),
            second: b.render(vars),
            second_degree: b.degree(),
        });
    }
    let d = g.homogeneous_degree().expect("homogeneous");
    if d == 0 {
        return Err(Error::InvalidSpec(format!("generator {index} is a unit; the quotient is not connected")));
    }
    Ok(d)
}

impl GradedPresentation {
    /// Validates homogeneous generators and computes the Gröbner basis.
    pub fn new(field: Field, vars: Vec<String>, gens: Vec<Polynomial>) -> Result<Self, Error> {
        check_names(&vars)?;
        let mut minimal = true;
        for (i, g) in gens.iter().enumerate() {
            if g.nvars() != vars.len() {
                return Err(Error::VariableCountMismatch { expected: vars.len(), found: g.nvars() });
            }
            if check_generator(i, g, &vars)? < 2 {
                minimal = false;
            }
        }
        let ideal =
            if gens.is_empty() { GroebnerIdeal::zero(vars.len(), ORDER, field) } else { groebner_basis(&gens, ORDER)? };
        Ok(GradedPresentation { field, vars, ideal, minimal })
    }

    pub fn polynomial_ring(field: Field, vars: Vec<String>) -> Result<Self, Error> {
        Self::new(field, vars, Vec::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ideal(&self) -> &GroebnerIdeal {
        &self.ideal
    }

    /// The ideal lies in the square of the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.ideal.is_zero()
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial, Error> {
        parse_polynomial(src, &self.vars, self.field, ORDER)
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial, Error> {
        normal_form(f, &self.ideal)
    }

    /// Largest degree of an element of the reduced Gröbner basis (0 for a polynomial ring).
    pub fn groebner_degree(&self) -> u32 {
        self.ideal.basis().iter().map(|g| g.max_degree()).max().unwrap_or(0)
    }

    pub fn render_ideal(&self) -> Vec<String> {
        self.ideal.basis().iter().map(|g| g.render(&self.vars)).collect()
    }

    /// `self / (gens)`; the generators must be homogeneous polynomials in the same variables.
    pub fn quotient(&self, gens: &[Polynomial]) -> Result<GradedPresentation, Error> {
        let mut all: Vec<Polynomial> = self.ideal.basis().to_vec();
        for (i, g) in gens.iter().enumerate() {
            if g.nvars() != self.nvars() {
                return Err(Error::VariableCountMismatch { expected: self.nvars(), found: g.nvars() });
            }
            check_generator(i, g, &self.vars)?;
            all.push(g.clone());
        }
        let minimal = self.minimal && gens.iter().all(|g| g.homogeneous_degree().unwrap_or(0) >= 2);
        let ideal = if all.is_empty() {
            GroebnerIdeal::zero(self.nvars(), ORDER, self.field)
        } else {
            groebner_basis(&all, ORDER)?
        };
        Ok(GradedPresentation { field: self.field, vars: self.vars.clone(), ideal, minimal })
    }

    /// The ambient polynomial ring.
    pub fn ambient(&self) -> GradedPresentation {
        GradedPresentation {
            field: self.field,
            vars: self.vars.clone(),
            ideal: GroebnerIdeal::zero(self.nvars(), ORDER, self.field),
            minimal: true,
        }
    }

    pub fn to_raw(&self) -> RawPresentation {
        RawPresentation { field: self.field, vars: self.vars.clone(), ideal: self.render_ideal() }
    }
}

/// Parses and validates a presentation.
pub fn validate_presentation(raw: &RawPresentation) -> Result<GradedPresentation, Error> {
    check_names(&raw.vars)?;
    let gens =
        raw.ideal.iter().map(|s| parse_polynomial(s, &raw.vars, raw.field, ORDER)).collect::<Result<Vec<_>, _>>()?;
    GradedPresentation::new(raw.field, raw.vars.clone(), gens)
}

/// `dim_k S_j` for `0 <= j <= d_max`.
pub fn hilbert_function(pres: &GradedPresentation, d_max: u32) -> Vec<u64> {
    hilbert_function_of(&pres.ideal, d_max)
}

/// `dim_k m/m^2`: the number of variables minus the linear forms in the ideal.
pub fn embedding_dimension(pres: &GradedPresentation) -> usize {
    let linear = pres.ideal.basis().iter().filter(|g| g.homogeneous_degree() == Some(1)).count();
    pres.nvars() - linear
}

/// A surjection `source -> source/(kernel)`.
#[derive(Clone, Debug)]
pub struct SurjectionSpec {
    pub source: Arc<GradedPresentation>,
    pub kernel: Vec<Polynomial>,
    pub target: Arc<GradedPresentation>,
    /// The kernel is zero in the source (an isomorphism).
    pub degenerate: bool,
}

impl SurjectionSpec {
    pub fn new(source: Arc<GradedPresentation>, kernel: Vec<Polynomial>) -> Result<Self, Error> {
        let target = Arc::new(source.quotient(&kernel)?);
        let mut reduced = Vec::new();
        for g in &kernel {
            let r = source.reduce(g)?;
            if !r.is_zero() {
                reduced.push(r);
            }
        }
        let degenerate = reduced.is_empty();
        Ok(SurjectionSpec { source, kernel: reduced, target, degenerate })
    }

    /// The augmentation `source -> k`.
    pub fn to_residue_field(source: Arc<GradedPresentation>) -> Result<Self, Error> {
        let n = source.nvars();
        let vars: Vec<Polynomial> = (0..n).map(|i| Polynomial::variable(n, i, ORDER, source.field())).collect();
        Self::new(source, vars)
    }

    /// The target is the residue field.
    pub fn targets_residue_field(&self) -> bool {
        embedding_dimension(&self.target) == 0
    }
}

/// The square `S1 <- R -> S2`, `S1 -> S <- S2` with `S = R/(I1 + I2)`.
#[derive(Clone, Debug)]
pub struct PairDiagram {
    pub r: Arc<GradedPresentation>,
    pub s1: Arc<GradedPresentation>,
    pub s2: Arc<GradedPresentation>,
    pub s: Arc<GradedPresentation>,
    pub phi1: SurjectionSpec,
    pub phi2: SurjectionSpec,
    pub psi1: SurjectionSpec,
    pub psi2: SurjectionSpec,
    /// The composite `R -> S`.
    pub phi: SurjectionSpec,
}

impl PairDiagram {
    pub fn i1(&self) -> &[Polynomial] {
        &self.phi1.kernel
    }

    pub fn i2(&self) -> &[Polynomial] {
        &self.phi2.kernel
    }

    pub fn is_degenerate(&self) -> bool {
        self.phi1.degenerate || self.phi2.degenerate
    }
}

pub fn compose_quotients(
    r: Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
) -> Result<PairDiagram, Error> {
    let phi1 = SurjectionSpec::new(r.clone(), i1.to_vec())?;
    let phi2 = SurjectionSpec::new(r.clone(), i2.to_vec())?;
    let both: Vec<Polynomial> = i1.iter().chain(i2).cloned().collect();
    let phi = SurjectionSpec::new(r.clone(), both)?;
    let psi1 = SurjectionSpec::new(phi1.target.clone(), i2.to_vec())?;
    let psi2 = SurjectionSpec::new(phi2.target.clone(), i1.to_vec())?;
    Ok(PairDiagram {
        r,
        s1: phi1.target.clone(),
        s2: phi2.target.clone(),
        s: phi.target.clone(),
        phi1,
        phi2,
        psi1,
        psi2,
        phi,
    })
}

/// Outcome of the embedding-dimension identity `edim S = edim S1 + edim S2 - edim R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdimCheck {
    /// `I1 ∩ I2 ⊆ m_R^2`.
    pub hypothesis_holds: bool,
    pub edim_r: usize,
    pub edim_s1: usize,
    pub edim_s2: usize,
    pub edim_s: usize,
    pub identity_holds: bool,
}

pub fn check_edim_identity(d: &PairDiagram) -> Result<EdimCheck, Error> {
    // Ideals of R are ideals of the ambient ring containing I_R; the
    // intersection lies in m_R^2 iff it has no linear forms beyond those of I_R.
    let lift1 = d.s1.ideal();
    let lift2 = d.s2.ideal();
    let inter = ideal_intersection(lift1, lift2)?;
    let base = d.r.ideal();
    let lin = |i: &GroebnerIdeal| d.r.nvars() as u64 - hilbert_function_of(i, 1)[1];
    let hypothesis_holds = lin(&inter) == lin(base);
    let (er, e1, e2, es) =
        (embedding_dimension(&d.r), embedding_dimension(&d.s1), embedding_dimension(&d.s2), embedding_dimension(&d.s));
    Ok(EdimCheck {
        hypothesis_holds,
        edim_r: er,
        edim_s1: e1,
        edim_s2: e2,
        edim_s: es,
        identity_holds: es + er == e1 + e2,
    })
}

/// Sum of two ideals given by generators, as a Gröbner ideal in the ambient ring.
pub fn ideal_of(pres: &GradedPresentation, gens: &[Polynomial]) -> Result<GroebnerIdeal, Error> {
    if gens.is_empty() {
        return Ok(GroebnerIdeal::zero(pres.nvars(), ORDER, pres.field()));
    }
    groebner_basis(gens, ORDER)
}

pub fn sum_of_ideals(a: &GroebnerIdeal, b: &GroebnerIdeal) -> Result<GroebnerIdeal, Error> {
    ideal_sum(a, b)
}

/// Normal monomials of a presentation per degree, with multiplication by variables.
#[derive(Debug)]
pub struct RingTables {
    field: Field,
    nvars: usize,
    max_degree: u32,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    /// `times_var[d][m][i]` = normal form of `x_i * basis[d][m]` in degree `d + 1`.
    times_var: Vec<Vec<Vec<SparseVec>>>,
}

impl RingTables {
    pub fn new(pres: &GradedPresentation, max_degree: u32) -> Result<Self, Error> {
        let n = pres.nvars();
        let leads = pres.ideal.leading_monomials();
        let mut basis = Vec::new();
        let mut index = Vec::new();
        for d in 0..=max_degree {
            let b: Vec<Monomial> =
                monomials_of_degree(n, d).into_iter().filter(|m| !leads.iter().any(|l| l.divides(m))).collect();
            index.push(b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect::<HashMap<_, _>>());
            basis.push(b);
        }
        let mut times_var = Vec::new();
        for d in 0..max_degree {
            let mut per = Vec::with_capacity(basis[d as usize].len());
            for m in &basis[d as usize] {
                let mut row = Vec::with_capacity(n);
                for i in 0..n {
                    let prod = m.mul(&Monomial::variable(n, i));
                    let nf = if index[d as usize + 1].contains_key(&prod) {
                        vec![(index[d as usize + 1][&prod], pres.field.one())]
                    } else {
                        let p = Polynomial::monomial(prod, pres.field.one(), ORDER);
                        let r = normal_form(&p, &pres.ideal)?;
                        sparse_from_entries(
                            r.terms().iter().map(|(mm, c)| (index[d as usize + 1][mm], c.clone())).collect(),
                        )
                    };
                    row.push(nf);
                }
                per.push(row);
            }
            times_var.push(per);
        }
        Ok(RingTables { field: pres.field, nvars: n, max_degree, basis, index, times_var })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self, d: u32) -> usize {
        self.basis.get(d as usize).map_or(0, |b| b.len())
    }

    pub fn basis(&self, d: u32) -> &[Monomial] {
        self.basis.get(d as usize).map_or(&[], |b| b.as_slice())
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.degree() as usize)?.get(m).copied()
    }

    /// Normal form of `x_i * v` for `v` in degree `d`.
    pub fn mul_var(&self, d: u32, v: &SparseVec, i: usize) -> SparseVec {
        let mut entries = Vec::new();
        for (k, c) in v {
            for (j, a) in &self.times_var[d as usize][*k][i] {
                entries.push((*j, a * c));
            }
        }
        sparse_from_entries(entries)
    }

    /// Normal form of `m * basis[d][k]` in degree `d + deg m`.
    pub fn mul_monomial(&self, d: u32, k: usize, m: &Monomial) -> SparseVec {
        assert!(
            d + m.degree() <= self.max_degree,
            "degree {} beyond the table bound {}",
            d + m.degree(),
            self.max_degree
        );
        let mut v: SparseVec = vec![(k, self.field.one())];
        let mut deg = d;
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                v = self.mul_var(deg, &v, i);
                deg += 1;
                if v.is_empty() {
                    return v;
                }
            }
        }
        v
    }

    /// Normal form of a monomial as a vector over `basis(deg m)`.
    pub fn normal_form_monomial(&self, m: &Monomial) -> SparseVec {
        if let Some(i) = self.index_of(m) {
            return vec![(i, self.field.one())];
        }
        self.mul_monomial(0, 0, m)
    }

    /// Coordinates of the degree-`d` component of `f`.
    pub fn coordinates(&self, f: &Polynomial, d: u32) -> SparseVec {
        let mut entries = Vec::new();
        for (m, c) in f.terms() {
            if m.degree() == d {
                for (j, a) in self.normal_form_monomial(m) {
                    entries.push((j, &a * c));
                }
            }
        }
        sparse_from_entries(entries)
    }

    pub fn to_polynomial(&self, d: u32, v: &SparseVec) -> Polynomial {
        let terms = v.iter().map(|(k, c)| (self.basis[d as usize][*k].clone(), c.clone())).collect();
        Polynomial::from_terms(self.nvars, ORDER, self.field, terms)
    }

    pub fn one(&self) -> Scalar {
        self.field.one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vars: &[&str], ideal: &[&str]) -> RawPresentation {
        RawPresentation {
            field: Field::Rational,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            ideal: ideal.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn validation_examples() {
        let p = validate_presentation(&raw(&["x", "y"], &["x^2", "y^2"])).unwrap();
        assert!(p.is_minimal());
        match validate_presentation(&raw(&["x", "y"], &["x^2 + y"])) {
            Err(Error::Inhomogeneous { index: 0, first_degree: 2, second_degree: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let p = validate_presentation(&raw(&["x", "y"], &["x"])).unwrap();
        assert!(!p.is_minimal());
        assert!(matches!(validate_presentation(&raw(&["x"], &["x - x"])), Err(Error::ZeroGenerator(0))));
        assert!(matches!(validate_presentation(&raw(&["x"], &["y"])), Err(Error::Parse(_))));
    }

    #[test]
    fn embedding_dimensions() {
        let e = |v: &[&str], i: &[&str]| embedding_dimension(&validate_presentation(&raw(v, i)).unwrap());
        assert_eq!(e(&["x", "y"], &["x^2", "y^2"]), 2);
        assert_eq!(e(&["x", "y"], &["x"]), 1);
        assert_eq!(e(&["x", "y", "u", "v"], &["x*y", "u*v"]), 4);
    }

    #[test]
    fn compose_pair_square() {
        let r = Arc::new(validate_presentation(&raw(&["x", "y"], &[])).unwrap());
        let i1 = vec![r.parse("x").unwrap()];
        let i2 = vec![r.parse("y^2").unwrap()];
        let d = compose_quotients(r.clone(), &i1, &i2).unwrap();
        assert_eq!(d.s.render_ideal(), vec!["y^2", "x"]);
        assert_eq!(hilbert_function(&d.s, 3), vec![1, 1, 0, 0]);
        let swapped = compose_quotients(r, &i2, &i1).unwrap();
        assert_eq!(*swapped.s, *d.s);
        let chk = check_edim_identity(&d).unwrap();
        assert!(chk.hypothesis_holds);
        assert_eq!((chk.edim_r, chk.edim_s1, chk.edim_s2, chk.edim_s), (2, 1, 2, 1));
        assert!(chk.identity_holds);
    }

    #[test]
    fn edim_hypothesis_fails_for_shared_linear_form() {
        let r = Arc::new(validate_presentation(&raw(&["x", "y"], &[])).unwrap());
        let d = compose_quotients(r.clone(), &[r.parse("x").unwrap()], &[r.parse("x").unwrap()]).unwrap();
        let chk = check_edim_identity(&d).unwrap();
        assert!(!chk.hypothesis_holds);
        assert!(!chk.identity_holds);
    }

    #[test]
    fn tables_multiply_in_quotient() {
        let p = validate_presentation(&raw(&["x", "y"], &["x*y", "x^2 - y^2"])).unwrap();
        let t = RingTables::new(&p, 3).unwrap();
        assert_eq!(t.dim(2), 1);
        // x^2 reduces to y^2 (degrevlex leading terms x*y, x^2)
        let x2 = Monomial::from_exponents(vec![2, 0]);
        let nf = t.normal_form_monomial(&x2);
        assert_eq!(t.to_polynomial(2, &nf).render(p.vars()), "y^2");
        assert_eq!(t.dim(3), 0);
    }
}
