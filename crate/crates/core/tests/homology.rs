use std::sync::Arc;

use tateforge::dg::{parse_dg_element, DgAlgebra, ExtensionKind, VarKind};
use tateforge::homology::{homology_dims, minimal_cycle_generators, BidegreeMatrix};
use tateforge::linalg::{rank, Subspace};
use tateforge::presentation::{validate_presentation, RawPresentation};
use tateforge::{Field, Window};

fn algebra(vars: &[&str], ideal: &[&str], adjoined: &[(&str, &str)]) -> DgAlgebra {
    let raw = RawPresentation {
        field: Field::Rational,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        ideal: ideal.iter().map(|s| s.to_string()).collect(),
    };
    let base = Arc::new(validate_presentation(&raw).unwrap());
    let mut alg = DgAlgebra::new(base, ExtensionKind::Closure, 8).unwrap();
    for (name, d) in adjoined {
        let d = parse_dg_element(&alg, d).unwrap();
        alg.add_variable(name.to_string(), 1, 1, VarKind::Exterior, d).unwrap();
    }
    alg
}

#[test]
fn koszul_complex_on_a_regular_element_is_acyclic() {
    let alg = algebra(&["x"], &[], &[("e", "x")]);
    let h = homology_dims(&alg, Window::new(1, 6)).unwrap();
    for n in 0..=1 {
        for j in 0..=6 {
            assert_eq!(h.get(n, j), usize::from(n == 0 && j == 0), "({n},{j})");
        }
    }
}

#[test]
fn nilpotent_koszul_homology() {
    let alg = algebra(&["x"], &["x^2"], &[("e", "x")]);
    let h = homology_dims(&alg, Window::new(1, 6)).unwrap();
    assert_eq!(h.get(1, 2), 1);
    assert_eq!(h.higher_support(), vec![(1, 2)]);
    let gens = minimal_cycle_generators(&alg, 1, Window::new(1, 6)).unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(alg.render(&gens[0].cycle), "x*e");
}

#[test]
fn two_squares_koszul_homology() {
    let alg = algebra(&["x", "y"], &["x^2", "y^2"], &[("e1", "x"), ("e2", "y")]);
    let w = Window::new(2, 6);
    let h = homology_dims(&alg, w).unwrap();
    assert_eq!(h.get(1, 2), 2);
    // Independent count: cycles in (1,2) minus the single boundary d(e1 e2).
    let m = BidegreeMatrix::differential(&alg, 1, 2);
    assert_eq!(m.cols(), 4);
    let r = rank(Field::Rational, &m.columns);
    let up = BidegreeMatrix::differential(&alg, 2, 2);
    assert_eq!(m.cols() - r - rank(Field::Rational, &up.columns), 2);

    let gens = minimal_cycle_generators(&alg, 1, w).unwrap();
    let mut rendered: Vec<String> = gens.iter().map(|g| alg.render(&g.cycle)).collect();
    rendered.sort();
    assert_eq!(rendered, vec!["x*e1", "y*e2"]);
    let basis = alg.basis_of_bidegree(1, 2);
    let mut span = Subspace::new(Field::Rational);
    for b in &up.columns {
        span.insert(b);
    }
    for g in &gens {
        assert!(alg.differential(&g.cycle).is_zero());
        assert!(span.insert(&alg.coordinates(&g.cycle, &basis)).is_some());
    }
}

#[test]
fn generator_counts_ignore_variable_order() {
    let a = algebra(&["x", "y"], &["x^2", "x*y"], &[("e1", "x"), ("e2", "y")]);
    let b = algebra(&["x", "y"], &["x^2", "x*y"], &[("e2", "y"), ("e1", "x")]);
    let w = Window::new(2, 6);
    assert_eq!(homology_dims(&a, w).unwrap().dims, homology_dims(&b, w).unwrap().dims);
    for n in 1..=2 {
        let count = |alg: &DgAlgebra| {
            let mut per = vec![0; 7];
            for g in minimal_cycle_generators(alg, n, w).unwrap() {
                per[g.ideg as usize] += 1;
            }
            per
        };
        assert_eq!(count(&a), count(&b));
    }
}

#[test]
fn rank_nullity_per_bidegree() {
    let alg = algebra(&["x", "y"], &["x^2", "x*y"], &[("e1", "x"), ("e2", "y")]);
    for n in 1..=2 {
        for j in 0..=6 {
            let m = BidegreeMatrix::differential(&alg, n, j);
            let (r, kernel) = tateforge::linalg::rank_and_kernel(Field::Rational, &m.columns);
            assert_eq!(r + kernel.len(), m.cols());
            let dense = m.dense();
            assert_eq!(dense.len(), m.rows());
        }
    }
}

#[test]
fn vanishing_homology_has_no_generators() {
    let alg = algebra(&["x"], &[], &[("e", "x")]);
    assert!(minimal_cycle_generators(&alg, 1, Window::new(1, 6)).unwrap().is_empty());
    assert!(homology_dims(&alg, Window::new(1, 9)).is_err());
}
