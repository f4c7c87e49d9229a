use std::sync::Arc;

use tateforge::dg::{parse_dg_element, DgAlgebra, DgSpecDoc, ExtensionKind, VarKind};
use tateforge::homology::homology_dims;
use tateforge::presentation::{validate_presentation, GradedPresentation, RawPresentation, SurjectionSpec};
use tateforge::tate::{
    acyclic_closure, build, certify_minimality, deviations_from_model, indecomposable_complex, lift_model_map,
    minimal_model, residue_closure, tensor_models, BuildOptions, DeviationTable,
};
use tateforge::{Field, Window};

fn ring(field: Field, vars: &[&str], ideal: &[&str]) -> Arc<GradedPresentation> {
    let raw = RawPresentation {
        field,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        ideal: ideal.iter().map(|s| s.to_string()).collect(),
    };
    Arc::new(validate_presentation(&raw).unwrap())
}

fn q(vars: &[&str], ideal: &[&str]) -> Arc<GradedPresentation> {
    ring(Field::Rational, vars, ideal)
}

fn surjection(source: &Arc<GradedPresentation>, kernel: &[&str]) -> SurjectionSpec {
    let gens = kernel.iter().map(|s| source.parse(s).unwrap()).collect();
    SurjectionSpec::new(source.clone(), gens).unwrap()
}

fn expect_only(table: &DeviationTable, entries: &[((u32, u32), u64)]) {
    let got: Vec<_> = table.nonzero().collect();
    assert_eq!(got, entries.to_vec());
}

/// Deviations peeled off a power series `P = prod (1+t^{odd})^e / (1-t^{even})^e`,
/// by dividing out one factor at a time.
fn peel(mut p: Vec<i64>) -> Vec<i64> {
    let n = p.len() - 1;
    let mut eps = vec![0i64; n + 1];
    for i in 1..=n {
        let e = p[i];
        eps[i] = e;
        for _ in 0..e.abs() {
            if i % 2 == 1 {
                // divide by (1 + t^i)
                for k in i..=n {
                    p[k] -= p[k - i];
                }
            } else {
                // multiply by (1 - t^i)
                for k in (i..=n).rev() {
                    p[k] -= p[k - i];
                }
            }
        }
    }
    eps
}

#[test]
fn hypersurface_closure() {
    let s = q(&["x"], &["x^2"]);
    let b = residue_closure(&s, Window::new(6, 12)).unwrap();
    assert!(b.exhausted.is_none());
    expect_only(&b.counts, &[((1, 1), 1), ((2, 2), 1)]);
    let names: Vec<_> = b.algebra.variables().iter().map(|v| v.name.clone()).collect();
    assert_eq!(names, ["y1_1", "y2_1"]);
    assert_eq!(b.algebra.variables()[1].kind, VarKind::Divided);
    assert_eq!(b.algebra.render(b.algebra.differential_of(1)), "x*y1_1");
    let h = homology_dims(&b.algebra, Window::new(5, 12)).unwrap();
    assert_eq!(h.higher_support(), Vec::<(u32, u32)>::new());
    assert_eq!(h.get(0, 0), 1);
    assert_eq!((1..=12).map(|j| h.get(0, j)).sum::<usize>(), 0);
}

#[test]
fn complete_intersection_closure() {
    let s = q(&["x", "y"], &["x^2", "y^2"]);
    let b = residue_closure(&s, Window::new(6, 12)).unwrap();
    expect_only(&b.counts, &[((1, 1), 2), ((2, 2), 2)]);
    assert_eq!(b.counts.totals(), vec![2, 2, 0, 0, 0, 0]);
    assert!(certify_minimality(&b.algebra).passed);
}

#[test]
fn golod_closure_matches_series_inversion() {
    let s = q(&["x", "y"], &["x^2", "x*y"]);
    let b = residue_closure(&s, Window::new(4, 10)).unwrap();
    // P = (1+t)^2 / (1 - 2t^2 - t^3) for this Golod ring.
    let n = 4;
    let mut p = vec![0i64; n + 1];
    let num = [1i64, 2, 1];
    for k in 0..=n {
        let mut v = if k < num.len() { num[k] } else { 0 };
        if k >= 2 {
            v += 2 * p[k - 2];
        }
        if k >= 3 {
            v += p[k - 3];
        }
        p[k] = v;
    }
    let eps = peel(p);
    let totals: Vec<i64> = b.counts.totals().into_iter().map(|v| v as i64).collect();
    assert_eq!(&eps[1..], totals.as_slice());
    assert_eq!(&totals[..3], &[2, 2, 1]);
    assert_eq!(b.counts.get(2, 2), 2);
    assert_eq!(b.counts.get(3, 3), 1);
}

#[test]
fn minimal_models() {
    let r = q(&["x", "y"], &[]);
    let m = minimal_model(&surjection(&r, &["x^2", "y^2"]), Window::new(6, 12)).unwrap();
    expect_only(&m.counts, &[((1, 2), 2)]);
    let ind = indecomposable_complex(&m.algebra);
    assert_eq!(ind.dims.into_iter().collect::<Vec<_>>(), vec![((1, 2), 2)]);
    assert!(ind.certificate.passed);

    let m = minimal_model(&surjection(&r, &["x^2", "x*y"]), Window::new(4, 10)).unwrap();
    assert_eq!(m.counts.get(1, 2), 2);
    assert_eq!(m.counts.get(2, 3), 1);
    assert_eq!(m.counts.total(2), 1);
    assert_eq!(m.algebra.variables()[2].kind, VarKind::Polynomial);
    assert!(certify_minimality(&m.algebra).passed);
    let h = homology_dims(&m.algebra, Window::new(3, 10)).unwrap();
    assert!(h.higher_support().is_empty());

    let id = minimal_model(&surjection(&r, &[]), Window::new(6, 12)).unwrap();
    assert!(id.algebra.variables().is_empty());
}

#[test]
fn model_route_agrees_with_closure_route() {
    for ideal in [&["x^2", "x*y"][..], &["x*y"], &["x^3"], &["x^2", "y^2"], &["x^2", "x*y", "y^3"]] {
        let r = q(&["x", "y"], &[]);
        let s = q(&["x", "y"], ideal);
        let w = Window::new(5, 10);
        let closure = residue_closure(&s, w).unwrap();
        let model = minimal_model(&surjection(&r, ideal), Window::new(4, 10)).unwrap();
        let from_model = deviations_from_model(&model, 2);
        assert_eq!(closure.counts.first_difference(&from_model), None, "{ideal:?}");
    }
}

#[test]
fn deviations_add_over_disjoint_variables() {
    let w = Window::new(5, 10);
    let s = residue_closure(&q(&["x", "y", "u"], &["x^2", "x*y", "u^2"]), w).unwrap();
    let s1 = residue_closure(&q(&["x", "y"], &["x^2", "x*y"]), w).unwrap();
    let s2 = residue_closure(&q(&["u"], &["u^2"]), w).unwrap();
    for i in 1..=5 {
        for j in 0..=10 {
            assert_eq!(s.counts.get(i, j), s1.counts.get(i, j) + s2.counts.get(i, j), "({i},{j})");
        }
    }
    assert_eq!(s.counts.total(2), 3);
    assert_eq!(s.counts.total(3), 1);
}

#[test]
fn tensor_of_models() {
    let r = q(&["x", "y"], &[]);
    let w = Window::new(6, 12);
    let a = minimal_model(&surjection(&r, &["x^2"]), w).unwrap();
    let b = minimal_model(&surjection(&r, &["y^2"]), w).unwrap();
    let t = tensor_models(&a.algebra, &b.algebra, w).unwrap();
    assert!(t.acyclic_in_window && t.minimal);
    let direct = minimal_model(&surjection(&r, &["x^2", "y^2"]), w).unwrap();
    assert_eq!(indecomposable_complex(&t.algebra).dims, indecomposable_complex(&direct.algebra).dims);

    let r4 = q(&["x", "y", "u", "v"], &[]);
    let w = Window::new(4, 8);
    let a = minimal_model(&surjection(&r4, &["x*y"]), w).unwrap();
    let b = minimal_model(&surjection(&r4, &["u*v"]), w).unwrap();
    let t = tensor_models(&a.algebra, &b.algebra, w).unwrap();
    assert!(t.acyclic_in_window && t.minimal);
    let direct = minimal_model(&surjection(&r4, &["x*y", "u*v"]), w).unwrap();
    assert_eq!(indecomposable_complex(&t.algebra).dims, indecomposable_complex(&direct.algebra).dims);

    let empty = minimal_model(&surjection(&r4, &[]), w).unwrap();
    let t = tensor_models(&a.algebra, &empty.algebra, w).unwrap();
    assert_eq!(t.algebra.variables(), a.algebra.variables());
    assert_eq!(DgSpecDoc::from_algebra(&t.algebra), DgSpecDoc::from_algebra(&a.algebra));

    // Not Tor-independent: (x) and (x) over Q[x].
    let r1 = q(&["x"], &[]);
    let a = minimal_model(&surjection(&r1, &["x"]), Window::new(3, 6)).unwrap();
    let t = tensor_models(&a.algebra, &a.algebra, Window::new(3, 6)).unwrap();
    assert!(!t.acyclic_in_window);
}

#[test]
fn lifts_between_models() {
    let r = q(&["x", "y"], &[]);
    let w = Window::new(4, 8);
    let m = minimal_model(&surjection(&r, &["x^2", "x*y"]), w).unwrap();
    let id = lift_model_map(&m.algebra, &m.algebra).unwrap();
    for block in id.blocks.values() {
        assert_eq!(block.rows, block.cols);
        for (i, row) in block.matrix.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                assert_eq!(c.is_one(), i == j);
                assert!(i == j || c.is_zero());
            }
        }
    }

    let regular = minimal_model(&surjection(&r, &[]), w).unwrap();
    let from_regular = lift_model_map(&regular.algebra, &m.algebra).unwrap();
    assert!(from_regular.blocks.values().all(|b| b.cols.is_empty() && b.rank == 0));

    let s2 = minimal_model(&surjection(&r, &["x^2"]), w).unwrap();
    let s = minimal_model(&surjection(&r, &["x^2", "y^2"]), w).unwrap();
    let psi = lift_model_map(&s2.algebra, &s.algebra).unwrap();
    let block = psi.block(1, 2).unwrap();
    assert_eq!(block.rank, 1);
    assert_eq!((block.rows.len(), block.cols.len()), (2, 1));

    // No map from S to S2 commutes with the presentations.
    assert!(lift_model_map(&s.algebra, &s2.algebra).is_err());
}

#[test]
fn minimality_certificates() {
    let mut alg = DgAlgebra::new(q(&["x"], &[]), ExtensionKind::Model, 4).unwrap();
    let d = parse_dg_element(&alg, "x^2").unwrap();
    alg.add_variable("a".into(), 1, 2, VarKind::Exterior, d).unwrap();
    alg.add_variable("b".into(), 2, 2, VarKind::Polynomial, alg.variable(0)).unwrap();
    let cert = certify_minimality(&alg);
    assert!(!cert.passed);
    assert_eq!(cert.counterexample, Some(("b".to_string(), "a".to_string())));

    let koszul =
        minimal_model(&surjection(&q(&["x", "y", "z"], &[]), &["x^2", "y^2", "z^3"]), Window::new(4, 8)).unwrap();
    assert!(certify_minimality(&koszul.algebra).passed);
    assert_eq!(koszul.algebra.variables().len(), 3);
}

#[test]
fn closure_over_a_quotient_base() {
    let r = q(&["x", "y"], &["x^2"]);
    let b = acyclic_closure(&surjection(&r, &["y^2"]), Window::new(4, 8)).unwrap();
    // y^2 is regular on Q[x,y]/(x^2): a single exterior variable.
    expect_only(&b.counts, &[((1, 2), 1)]);
    let h = homology_dims(&b.algebra, Window::new(3, 8)).unwrap();
    assert!(h.higher_support().is_empty());
}

#[test]
fn prime_characteristic() {
    let s = ring(Field::prime(3).unwrap(), &["x"], &["x^2"]);
    let b = residue_closure(&s, Window::new(6, 12)).unwrap();
    expect_only(&b.counts, &[((1, 1), 1), ((2, 2), 1)]);
    let s = ring(Field::prime(3).unwrap(), &["x"], &["x^3"]);
    let b = residue_closure(&s, Window::new(6, 12)).unwrap();
    expect_only(&b.counts, &[((1, 1), 1), ((2, 3), 1)]);
    let r = ring(Field::prime(3).unwrap(), &["x"], &[]);
    let m = minimal_model(&surjection(&r, &["x^2"]), Window::new(6, 12)).unwrap();
    assert!(m.flags.iter().any(|f| f.starts_with("experimental")));
}

#[test]
fn size_budget_keeps_the_completed_prefix() {
    let s = q(&["x", "y", "z"], &["x^2", "x*y", "y*z"]);
    let opts = BuildOptions { window: Window::new(6, 12), basis_limit: 40 };
    let b = build(&SurjectionSpec::to_residue_field(s).unwrap(), opts, ExtensionKind::Closure).unwrap();
    let stop = b.exhausted.clone().expect("budget too small");
    assert!(stop.completed >= 1);
    assert_eq!(b.counts.window.hdeg_max, stop.completed);
    assert_eq!(b.counts.get(1, 1), 3);
    assert!(b.complete().is_err());
}

#[test]
fn built_closures_serialize() {
    let s = q(&["x", "y"], &["x^2", "x*y"]);
    let b = residue_closure(&s, Window::new(4, 8)).unwrap();
    let doc = DgSpecDoc::from_algebra(&b.algebra);
    let back = doc.to_algebra(8).unwrap();
    assert_eq!(DgSpecDoc::from_algebra(&back), doc);
}
