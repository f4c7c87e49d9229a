use std::sync::Arc;

use tateforge::dg::{parse_dg_element, DgAlgebra, DgElement, DgSpecDoc, ExtensionKind, VarKind, Word};
use tateforge::poly::Monomial;
use tateforge::presentation::{validate_presentation, GradedPresentation, RawPresentation};
use tateforge::Field;

fn pres(vars: &[&str], ideal: &[&str]) -> Arc<GradedPresentation> {
    let raw = RawPresentation {
        field: Field::Rational,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        ideal: ideal.iter().map(|s| s.to_string()).collect(),
    };
    Arc::new(validate_presentation(&raw).unwrap())
}

fn add(alg: &mut DgAlgebra, name: &str, h: u32, j: u32, kind: VarKind, d: &str) -> usize {
    let d = parse_dg_element(alg, d).unwrap();
    alg.add_variable(name.into(), h, j, kind, d).unwrap()
}

fn el(alg: &DgAlgebra, s: &str) -> DgElement {
    parse_dg_element(alg, s).unwrap()
}

/// `Q[x]/(x^2)<e, y>` with `d e = x`, `d y = x e`.
fn nilpotent_closure() -> DgAlgebra {
    let mut alg = DgAlgebra::new(pres(&["x"], &["x^2"]), ExtensionKind::Closure, 12).unwrap();
    add(&mut alg, "e", 1, 1, VarKind::Exterior, "x");
    add(&mut alg, "y", 2, 2, VarKind::Divided, "x*e");
    alg
}

#[test]
fn exterior_squares_vanish() {
    let alg = nilpotent_closure();
    let e = el(&alg, "e");
    assert!(alg.multiply(&e, &e).unwrap().is_zero());
}

#[test]
fn divided_powers_multiply_by_binomials() {
    let alg = nilpotent_closure();
    let p = alg.multiply(&el(&alg, "g(y,2)"), &el(&alg, "y")).unwrap();
    assert_eq!(p, el(&alg, "3*g(y,3)"));
    assert_eq!(alg.render(&p), "3*g(y,3)");
    assert_eq!(alg.render(&el(&alg, "y^2")), "2*g(y,2)");
}

#[test]
fn odd_variables_anticommute() {
    let mut alg = DgAlgebra::new(pres(&["x1", "x2"], &[]), ExtensionKind::Model, 6).unwrap();
    add(&mut alg, "e1", 1, 1, VarKind::Exterior, "x1");
    add(&mut alg, "e2", 1, 1, VarKind::Exterior, "x2");
    let (e1, e2) = (el(&alg, "e1"), el(&alg, "e2"));
    let a = alg.multiply(&e1, &e2).unwrap();
    let b = alg.multiply(&e2, &e1).unwrap();
    assert!(a.add(&b).is_zero());
    assert!(!a.is_zero());
    assert_eq!(alg.differential(&a), el(&alg, "x1*e2 - x2*e1"));
}

#[test]
fn differential_of_divided_power() {
    let alg = nilpotent_closure();
    assert_eq!(alg.differential(&el(&alg, "g(y,2)")), el(&alg, "x*e*y"));
}

#[test]
fn differential_squares_to_zero_on_closure_words() {
    let alg = nilpotent_closure();
    // d(e y^(2)) = x y^(2) - e (x e y) = x y^(2); then d(x y^(2)) = x (x e y) = 0.
    let w = el(&alg, "e*g(y,2)");
    let dw = alg.differential(&w);
    assert_eq!(dw, el(&alg, "x*g(y,2)"));
    assert!(alg.differential(&dw).is_zero());
    for n in 0..=6 {
        for j in 0..=12 {
            let basis = alg.basis_of_bidegree(n, j);
            if n < 2 {
                continue;
            }
            let mid = alg.basis_of_bidegree(n - 1, j);
            let low = alg.basis_of_bidegree(n - 2, j);
            for col in alg.differential_matrix(&basis, &mid) {
                let image = alg.element(&mid, &col);
                assert!(alg.coordinates(&alg.differential(&image), &low).is_empty());
            }
        }
    }
}

#[test]
fn gamma_leibniz_consistency() {
    let alg = nilpotent_closure();
    let dy = alg.differential_of(1).clone();
    for i in 2..=6u32 {
        let lhs = alg.differential(&el(&alg, &format!("g(y,{i})")));
        let rhs = alg.multiply(&dy, &el(&alg, &format!("g(y,{})", i - 1))).unwrap();
        assert_eq!(lhs, rhs, "i = {i}");
    }
}

#[test]
fn bidegree_bases() {
    let mut alg = DgAlgebra::new(pres(&["x"], &["x^2"]), ExtensionKind::Closure, 6).unwrap();
    add(&mut alg, "e", 1, 1, VarKind::Exterior, "x");
    let b = alg.basis_of_bidegree(1, 2);
    assert_eq!(b.len(), 1);
    assert_eq!(alg.render(&alg.element(&b, &vec![(0, Field::Rational.one())])), "x*e");

    let s = pres(&["x", "y"], &["x^2 - y^2", "x*y"]);
    let alg = DgAlgebra::new(s.clone(), ExtensionKind::Closure, 6).unwrap();
    for j in 0..=6 {
        let b = alg.basis_of_bidegree(0, j);
        let monos: Vec<Monomial> = b.elements.iter().map(|(_, k)| alg.tables().basis(j)[*k].clone()).collect();
        assert_eq!(monos, alg.tables().basis(j));
    }

    let mut alg = DgAlgebra::new(pres(&["x", "y"], &[]), ExtensionKind::Model, 6).unwrap();
    add(&mut alg, "e1", 1, 1, VarKind::Exterior, "x");
    add(&mut alg, "e2", 1, 1, VarKind::Exterior, "y");
    let b = alg.basis_of_bidegree(2, 2);
    assert_eq!(b.len(), 1);
    assert_eq!(b.elements[0].0.render(alg.variables()), "e1*e2");
}

/// Coefficients of `prod_{odd} (1 + t s^j) * prod_{even} (1 - t^2 s^j)^{-1}`
/// times the base Hilbert series, as a table over `(n, j)`.
fn product_formula(vars: &[(u32, u32)], hilbert: &[u64], n_max: usize, j_max: usize) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; j_max + 1]; n_max + 1];
    for (j, h) in hilbert.iter().enumerate().take(j_max + 1) {
        table[0][j] = *h;
    }
    for &(h, d) in vars {
        let (h, d) = (h as usize, d as usize);
        let mut next = vec![vec![0u64; j_max + 1]; n_max + 1];
        for n in 0..=n_max {
            for j in 0..=j_max {
                let mut k = 0;
                while n >= k * h && j >= k * d {
                    next[n][j] += table[n - k * h][j - k * d];
                    if h % 2 == 1 && k == 1 {
                        break;
                    }
                    k += 1;
                }
            }
        }
        table = next;
    }
    table
}

#[test]
fn basis_sizes_match_the_product_formula() {
    let s = pres(&["x", "y"], &["x^2", "x*y"]);
    let mut alg = DgAlgebra::new(s.clone(), ExtensionKind::Closure, 8).unwrap();
    add(&mut alg, "e1", 1, 1, VarKind::Exterior, "x");
    add(&mut alg, "e2", 1, 1, VarKind::Exterior, "y");
    add(&mut alg, "y1", 2, 2, VarKind::Divided, "x*e1");
    add(&mut alg, "y2", 2, 2, VarKind::Divided, "y*e1");
    add(&mut alg, "w", 3, 3, VarKind::Exterior, "x*y2 - y*y1");
    let hilbert: Vec<u64> = (0..=8).map(|j| alg.tables().dim(j) as u64).collect();
    let vars: Vec<(u32, u32)> = alg.variables().iter().map(|v| (v.hdeg, v.ideg)).collect();
    let expect = product_formula(&vars, &hilbert, 6, 8);
    for n in 0..=6u32 {
        for j in 0..=8u32 {
            assert_eq!(alg.basis_of_bidegree(n, j).len() as u64, expect[n as usize][j as usize], "({n},{j})");
        }
    }
}

#[test]
fn products_are_associative_and_graded_commutative() {
    let mut alg = DgAlgebra::new(pres(&["x", "y"], &["x^2", "x*y"]), ExtensionKind::Closure, 10).unwrap();
    add(&mut alg, "e1", 1, 1, VarKind::Exterior, "x");
    add(&mut alg, "e2", 1, 1, VarKind::Exterior, "y");
    add(&mut alg, "y1", 2, 2, VarKind::Divided, "x*e1");
    add(&mut alg, "w", 3, 3, VarKind::Exterior, "x*e2*e1 + y*y1");
    let mut samples = Vec::new();
    for (n, j) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (0, 1)] {
        let b = alg.basis_of_bidegree(n, j);
        for i in 0..b.len() {
            samples.push((n, alg.element(&b, &vec![(i, Field::Rational.one())])));
        }
    }
    let minus = -&Field::Rational.one();
    for (na, a) in &samples {
        for (nb, b) in &samples {
            let ab = alg.multiply(a, b).unwrap();
            let ba = alg.multiply(b, a).unwrap();
            let sign_ba = if (na * nb) % 2 == 1 { ba.scale(&minus) } else { ba };
            assert_eq!(ab, sign_ba);
            for (_, c) in samples.iter().take(6) {
                let l = alg.multiply(&ab, c).unwrap();
                let r = alg.multiply(a, &alg.multiply(b, c).unwrap()).unwrap();
                assert_eq!(l, r);
                let lhs = alg.differential(&ab);
                let rhs = alg
                    .multiply(&alg.differential(a), b)
                    .unwrap()
                    .add(&alg.multiply(a, &alg.differential(b)).unwrap().scale(&minus.pow(*na)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn base_change_kills_positive_degree_coefficients() {
    let mut alg = DgAlgebra::new(pres(&["x"], &[]), ExtensionKind::Model, 4).unwrap();
    add(&mut alg, "e", 1, 1, VarKind::Exterior, "x");
    let k = alg.base_change_to_k().unwrap();
    assert_eq!(k.base().nvars(), 0);
    assert_eq!(k.variables().len(), 1);
    assert!(k.differential_of(0).is_zero());
    let again = k.base_change_to_k().unwrap();
    assert_eq!(again.variables(), k.variables());
    assert!(again.differential_of(0).is_zero());
}

#[test]
fn rejects_mismatched_inputs() {
    let alg = nilpotent_closure();
    let other = nilpotent_closure();
    assert!(alg.multiply(&el(&alg, "e"), &el(&other, "e")).is_err());
    let mut bad = DgAlgebra::new(pres(&["x"], &[]), ExtensionKind::Closure, 4).unwrap();
    let d = parse_dg_element(&bad, "x").unwrap();
    assert!(bad.add_variable("z".into(), 2, 1, VarKind::Divided, d.clone()).is_err());
    assert!(bad.add_variable("z".into(), 1, 1, VarKind::Divided, d.clone()).is_err());
    assert!(bad.add_variable("z".into(), 2, 2, VarKind::Polynomial, d).is_err());
    assert!(parse_dg_element(&bad, "g(x,2)").is_err());
    assert!(parse_dg_element(&bad, "q").is_err());
}

#[test]
fn json_round_trip() {
    let alg = nilpotent_closure();
    let doc = DgSpecDoc::from_algebra(&alg);
    let text = serde_json::to_string(&doc).unwrap();
    let back: DgSpecDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    let rebuilt = back.to_algebra(12).unwrap();
    assert_eq!(rebuilt.variables(), alg.variables());
    assert_eq!(rebuilt.render(rebuilt.differential_of(1)), "x*e");
    assert_eq!(DgSpecDoc::from_algebra(&rebuilt), doc);
    assert_eq!(Word::single(1, 2).render(alg.variables()), "g(y,2)");
}
