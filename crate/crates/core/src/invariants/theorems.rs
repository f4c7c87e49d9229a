use std::collections::BTreeSet;
use std::sync::Arc;

use log::info;
use rayon::prelude::*;

use crate::error::Error;
use crate::linalg::{rank, SparseVec};
use crate::poly::Polynomial;
use crate::presentation::{check_edim_identity, compose_quotients, GradedPresentation, PairDiagram, SurjectionSpec};
use crate::tate::{lift_model_map, minimal_model, residue_closure, DeviationTable, TateBuild};
use crate::window::Window;

use super::classify::{classify_map, golod_check, koszul_check, poincare_series, residue_degree_bound, ClassifyMode};
use super::tor::tor_independence_routes;
use super::verdict::{CheckRecord, ComparisonTable, Outcome, PairInputs, TheoremReport, Witness};

fn render(pres: &GradedPresentation, gens: &[Polynomial]) -> Vec<String> {
    gens.iter().map(|g| g.render(pres.vars())).collect()
}

pub fn pair_inputs(r: &GradedPresentation, i1: &[Polynomial], i2: &[Polynomial]) -> PairInputs {
    PairInputs {
        field: r.field().describe(),
        vars: r.vars().to_vec(),
        base: r.render_ideal(),
        i1: render(r, i1),
        i2: render(r, i2),
    }
}

/// The Tor-independence hypothesis as a check record.
pub fn tor_independence_record(
    r: &GradedPresentation,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<CheckRecord, Error> {
    let routes = tor_independence_routes(r, i1, i2, window)?;
    let mut rec = CheckRecord::new("tor-independence", window);
    let mut table = ComparisonTable::new("Tor_{i,j}(S1, S2)", &["dim"]);
    for ((i, j), v) in routes.tor.nonzero() {
        table.push(format!("({i},{j})"), vec![v as i128], i == 0);
    }
    rec.tables.push(table);
    let verdict = routes.verdict().clone();
    if let Some(v) = &routes.intersection {
        rec.notes.push(format!("intersection route: {}; resolution route: {}", v.status, routes.resolution.status));
    }
    if !verdict.is_yes() {
        rec.fail(
            verdict.witness.clone().or(routes.resolution.witness.clone()).expect("a negative verdict has a witness"),
        );
    }
    rec.verdict = Some(verdict);
    Ok(rec)
}

fn tor_hypothesis(
    rep: &mut TheoremReport,
    r: &GradedPresentation,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<bool, Error> {
    let rec = tor_independence_record(r, i1, i2, window)?;
    let ok = rep.hypothesis(rec);
    if !ok {
        rep.notes.push("hypothesis fails: the pair is not Tor-independent".into());
    }
    Ok(ok)
}

/// Attaches the almost-small status of `φ1` and `φ2`; over a polynomial base
/// it holds automatically.
fn almost_small_hypothesis(rep: &mut TheoremReport, d: &PairDiagram, window: Window) -> Result<(), Error> {
    for (name, phi) in [("almost-small phi1", &d.phi1), ("almost-small phi2", &d.phi2)] {
        let verdict = classify_map(phi, ClassifyMode::AlmostSmall, window)?;
        let mut rec = CheckRecord::new(name, window);
        if !verdict.is_yes() {
            // Recorded, not enforced: the checks still run.
            rec.outcome = Outcome::Skipped;
            rec.first_failure = verdict.witness.clone();
            rec.notes.push("the map is not almost small; the theorem does not apply".into());
        }
        rec.verdict = Some(verdict);
        rep.hypotheses.push(rec);
    }
    Ok(())
}

fn closures(rings: &[&Arc<GradedPresentation>], window: Window) -> Result<Vec<TateBuild>, Error> {
    rings.par_iter().map(|p| residue_closure(p, window).and_then(TateBuild::complete)).collect()
}

fn bidegrees<'a>(tables: impl Iterator<Item = &'a DeviationTable>) -> BTreeSet<(u32, u32)> {
    tables.flat_map(|t| t.nonzero().map(|(k, _)| k)).collect()
}

/// `ε(S) = ε(S1) + ε(S2) - ε(R)` per bidegree, the `π^1` part through the
/// embedding dimensions, and the pullback of the maps on indecomposables.
pub fn verify_pullback_theorem(
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<TheoremReport, Error> {
    let d = compose_quotients(r.clone(), i1, i2)?;
    let mut rep = TheoremReport::new("pullback", pair_inputs(r, d.i1(), d.i2()), window);
    if !tor_hypothesis(&mut rep, r, i1, i2, window)? {
        return Ok(rep);
    }
    almost_small_hypothesis(&mut rep, &d, window)?;
    if d.is_degenerate() {
        rep.notes.push("degenerate pair: one kernel is zero".into());
    }
    rep.notes.push("the identity is checked in the symmetric form ε(S) = ε(S1) + ε(S2) - ε(R)".into());

    let builds = closures(&[&d.s, &d.s1, &d.s2, &d.r], window)?;
    let [s, s1, s2, rr] = [0, 1, 2, 3].map(|k| &builds[k].counts);

    let mut a = CheckRecord::new("deviations", window);
    let mut table = ComparisonTable::new("ε_{i,j}", &["S", "S1", "S2", "R"]);
    for (i, j) in bidegrees([s, s1, s2, rr].into_iter()).into_iter().filter(|&(i, _)| i >= 2) {
        let v = [s, s1, s2, rr].map(|t| t.get(i, j) as i128);
        let expected = v[1] + v[2] - v[3];
        let ok = v[0] == expected;
        if !ok {
            a.fail(Witness::Bidegree { hdeg: i, ideg: j, expected, actual: v[0] });
        }
        table.push(format!("({i},{j})"), v.to_vec(), ok);
    }
    a.tables.push(table);
    rep.check(a);

    let mut b = CheckRecord::new("pi1-edim", window);
    let edim = check_edim_identity(&d)?;
    let mut table = ComparisonTable::new("embedding dimension", &["S", "S1", "S2", "R"]);
    let v = [edim.edim_s, edim.edim_s1, edim.edim_s2, edim.edim_r].map(|e| e as i128);
    table.push("edim", v.to_vec(), edim.identity_holds);
    if !edim.identity_holds {
        b.fail(Witness::Bidegree { hdeg: 1, ideg: 1, expected: v[1] + v[2] - v[3], actual: v[0] });
    }
    for (i, j) in bidegrees([s, s1, s2, rr].into_iter()).into_iter().filter(|&(i, _)| i == 1) {
        let v = [s, s1, s2, rr].map(|t| t.get(i, j) as i128);
        let expected = v[1] + v[2] - v[3];
        if v[0] != expected {
            b.fail(Witness::Bidegree { hdeg: i, ideg: j, expected, actual: v[0] });
        }
        table.push(format!("({i},{j})"), v.to_vec(), v[0] == expected);
    }
    if !edim.hypothesis_holds {
        b.notes.push("I1 ∩ I2 is not contained in the square of the maximal ideal".into());
    }
    b.tables.push(table);
    rep.check(b);

    rep.check(pullback_of_indecomposables(&d, window)?);
    Ok(rep)
}

/// Over the ambient polynomial ring `P`, the lifts `P[X_R] -> P[X_Si]` induce
/// `ind X_R -> ind X_S1 ⊕ ind X_S2`; its injectivity in each bidegree is the
/// dual of joint surjectivity onto `π(R)`, and its cokernel dimension
/// must then equal `dim ind X_S`.
fn pullback_of_indecomposables(d: &PairDiagram, window: Window) -> Result<CheckRecord, Error> {
    let mut rec = CheckRecord::new("indecomposable-pullback", window);
    if window.hdeg_max < 2 {
        return Ok(rec.skip("the window has no homological degree at least two"));
    }
    let model_window = Window::new(window.hdeg_max - 1, window.ideg_max);
    let ambient = Arc::new(d.r.ambient());
    let specs = [&d.s, &d.s1, &d.s2, &d.r].map(|p| SurjectionSpec::new(ambient.clone(), p.ideal().basis().to_vec()));
    let specs: Vec<SurjectionSpec> = specs.into_iter().collect::<Result<_, _>>()?;
    let models: Vec<TateBuild> = specs
        .par_iter()
        .map(|s| minimal_model(s, model_window).and_then(TateBuild::complete))
        .collect::<Result<_, _>>()?;
    let (ms, m1, m2, mr) = (&models[0], &models[1], &models[2], &models[3]);
    let ind1 = lift_model_map(&mr.algebra, &m1.algebra)?;
    let ind2 = lift_model_map(&mr.algebra, &m2.algebra)?;
    let field = d.r.field();

    let mut table = ComparisonTable::new("ind X per bidegree", &["S", "S1", "S2", "R", "rank"]);
    let keys = bidegrees([&ms.counts, &m1.counts, &m2.counts, &mr.counts].into_iter());
    for (n, j) in keys {
        let dims = [ms, m1, m2, mr].map(|m| m.counts.get(n, j) as i128);
        let cols = dims[3] as usize;
        let stacked: Vec<SparseVec> = if cols == 0 {
            Vec::new()
        } else {
            let b1 = ind1.block(n, j).expect("block for every source bidegree").columns();
            let b2 = ind2.block(n, j).expect("block for every source bidegree").columns();
            let shift = dims[1] as usize;
            b1.into_iter()
                .zip(b2)
                .map(|(mut c, c2)| {
                    c.extend(c2.into_iter().map(|(k, a)| (k + shift, a)));
                    c
                })
                .collect()
        };
        let rk = rank(field, &stacked) as i128;
        let expected = dims[1] + dims[2] - rk;
        let ok = rk == dims[3] && dims[0] == expected;
        if !ok {
            let witness = if rk != dims[3] {
                Witness::Bidegree { hdeg: n + 1, ideg: j, expected: dims[3], actual: rk }
            } else {
                Witness::Bidegree { hdeg: n + 1, ideg: j, expected, actual: dims[0] }
            };
            rec.fail(witness);
        }
        table.push(format!("({},{j})", n + 1), [dims.as_slice(), &[rk]].concat(), ok);
    }
    rec.notes.push("rows are indexed by deviation degree: model variables in degree n give π^{n+1}".into());
    rec.tables.push(table);
    Ok(rec)
}

/// `P^S_k = P^{S1}_k P^{S2}_k / P^R_k` coefficient by coefficient through `t^t_max`.
pub fn verify_poincare_identity(
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
    t_max: usize,
) -> Result<TheoremReport, Error> {
    let d = compose_quotients(r.clone(), i1, i2)?;
    let mut rep = TheoremReport::new("poincare-identity", pair_inputs(r, d.i1(), d.i2()), window);
    if !tor_hypothesis(&mut rep, r, i1, i2, window)? {
        return Ok(rep);
    }
    almost_small_hypothesis(&mut rep, &d, window)?;
    if d.is_degenerate() {
        rep.notes.push("degenerate pair: one kernel is zero".into());
    }
    let series =
        [&d.s, &d.s1, &d.s2, &d.r].par_iter().map(|p| poincare_series(p, t_max)).collect::<Result<Vec<_>, _>>()?;
    let rhs = series[1].mul(&series[2])?.div(&series[3])?;
    let mut rec = CheckRecord::new("series", Window::new(t_max as u32, window.ideg_max));
    let mut table = ComparisonTable::new("coefficient of t^i", &["P^S", "P^S1", "P^S2", "P^R", "P^S1 P^S2 / P^R"]);
    for i in 0..=t_max {
        let ok = series[0].coeff(i) == rhs.coeff(i);
        if !ok {
            rec.fail(Witness::Coefficient { index: i, expected: rhs.coeff(i), actual: series[0].coeff(i) });
        }
        let mut row: Vec<i128> = series.iter().map(|s| s.coeff(i)).collect();
        row.push(rhs.coeff(i));
        table.push(format!("t^{i}"), row, ok);
    }
    rec.tables.push(table);
    rec.notes.push(format!("P^S = {}", series[0]));
    rec.notes.push(format!("P^S1 P^S2 / P^R = {rhs}"));
    rep.check(rec);
    Ok(rep)
}

/// Over a polynomial base, `S` is Koszul exactly when `S1` and `S2` are.
pub fn verify_koszul_transfer(
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<TheoremReport, Error> {
    let d = compose_quotients(r.clone(), i1, i2)?;
    let mut rep = TheoremReport::new("koszul-transfer", pair_inputs(r, d.i1(), d.i2()), window);
    let mut base = CheckRecord::new("polynomial-base", window);
    if !r.is_polynomial_ring() {
        base.fail(Witness::Element { degree: 0, description: "the base ring is not a polynomial ring".into() });
    }
    if !rep.hypothesis(base) {
        rep.notes.push("hypothesis fails: the base is not a polynomial ring".into());
        return Ok(rep);
    }
    if !tor_hypothesis(&mut rep, r, i1, i2, window)? {
        return Ok(rep);
    }
    if d.is_degenerate() {
        rep.notes.push("degenerate pair: one kernel is zero".into());
    }
    let verdicts = [&d.s1, &d.s2, &d.s].par_iter().map(|p| koszul_check(p, window)).collect::<Result<Vec<_>, _>>()?;
    let mut rec = CheckRecord::new("koszul", window);
    let mut table = ComparisonTable::new("Koszul verdicts", &["koszul", "witness hdeg", "witness ideg"]);
    for (name, v) in ["S1", "S2", "S"].iter().zip(&verdicts) {
        let (h, j) = match &v.witness {
            Some(Witness::Bidegree { hdeg, ideg, .. }) => (*hdeg as i128, *ideg as i128),
            _ => (-1, -1),
        };
        table.push(*name, vec![v.is_yes() as i128, h, j], true);
    }
    let expected = verdicts[0].is_yes() && verdicts[1].is_yes();
    if verdicts[2].is_yes() != expected {
        let witness = verdicts
            .iter()
            .find_map(|v| v.witness.clone())
            .unwrap_or(Witness::Element { degree: 0, description: "S is Koszul but S1 or S2 is not".into() });
        rec.fail(witness);
        table.rows[2].ok = false;
    }
    rec.tables.push(table);
    rec.verdict = Some(verdicts[2].clone());
    rep.check(rec);
    Ok(rep)
}

/// `R -> S` is not Golod for a Tor-independent pair of nonzero kernels.
pub fn verify_never_golod(
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<TheoremReport, Error> {
    let d = compose_quotients(r.clone(), i1, i2)?;
    let mut rep = TheoremReport::new("never-golod", pair_inputs(r, d.i1(), d.i2()), window);
    if !tor_hypothesis(&mut rep, r, i1, i2, window)? {
        return Ok(rep);
    }
    let mut nontrivial = CheckRecord::new("nontrivial-kernels", window);
    if d.is_degenerate() {
        nontrivial.fail(Witness::Element { degree: 0, description: "one of the kernels is zero".into() });
    }
    if !rep.hypothesis(nontrivial) {
        rep.notes.push("hypothesis fails: both kernels must be nonzero".into());
        return Ok(rep);
    }
    let golod = golod_check(&d.phi, window)?;
    let mut rec = CheckRecord::new("golod-bound", window);
    let mut table = ComparisonTable::new(
        "coefficient of t^i; ok marks the bound being attained",
        &["bound", "P^S", "P^R", "P^R_S"],
    );
    for i in 0..=golod.bound.t_max() {
        let row = vec![
            golod.bound.coeff(i),
            golod.target_series.coeff(i),
            golod.source_series.coeff(i),
            golod.relative_series.coeff(i),
        ];
        let attained = row[0] == row[1];
        table.push(format!("t^{i}"), row, attained);
    }
    match (&golod.verdict.witness, golod.verdict.is_yes()) {
        (Some(Witness::Coefficient { .. }), false) => {}
        _ => rec.fail(Witness::Element { degree: 0, description: "the Golod bound is attained in the window".into() }),
    }
    rec.tables.push(table);
    rec.verdict = Some(golod.verdict);
    rep.check(rec);
    Ok(rep)
}

type PairVerifier =
    fn(&Arc<GradedPresentation>, &[Polynomial], &[Polynomial], Window, usize) -> Result<TheoremReport, Error>;

/// Runs Tor-independence and then every verifier in a fixed order; stops at
/// the first hypothesis failure.
pub fn verify_all(
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
    t_max: usize,
) -> Result<Vec<TheoremReport>, Error> {
    let mut tor = TheoremReport::new("tor-independence", pair_inputs(r, i1, i2), window);
    let hypothesis_ok = tor_hypothesis(&mut tor, r, i1, i2, window)?;
    let mut reports = vec![tor];
    if !hypothesis_ok {
        return Ok(reports);
    }
    let steps: [(&str, PairVerifier); 4] = [
        ("pullback", |r, a, b, w, _| verify_pullback_theorem(r, a, b, w)),
        ("poincare-identity", verify_poincare_identity),
        ("koszul-transfer", |r, a, b, w, _| verify_koszul_transfer(r, a, b, w)),
        ("never-golod", |r, a, b, w, _| verify_never_golod(r, a, b, w)),
    ];
    for (name, step) in steps {
        info!("verify-all: {name}");
        let rep = step(r, i1, i2, window, t_max)?;
        let stop = rep.outcome == Outcome::Skipped && name != "koszul-transfer";
        reports.push(rep);
        if stop {
            break;
        }
    }
    cross_check(&reports, r, i1, i2, window, t_max)?;
    Ok(reports)
}

/// The deviation identity implies the series identity once the window
/// contains every deviation that enters the series through `t^t_max`.
fn cross_check(
    reports: &[TheoremReport],
    r: &Arc<GradedPresentation>,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
    t_max: usize,
) -> Result<(), Error> {
    let find = |name: &str| reports.iter().find(|rep| rep.theorem == name);
    let (Some(pullback), Some(series)) = (find("pullback"), find("poincare-identity")) else {
        return Ok(());
    };
    let deviations_ok = pullback.checks.iter().filter(|c| c.name != "indecomposable-pullback").all(CheckRecord::passed);
    let d = compose_quotients(r.clone(), i1, i2)?;
    let covered = window.hdeg_max as usize >= t_max
        && [&d.s, &d.s1, &d.s2, &d.r].iter().all(|p| residue_degree_bound(p, t_max as u32) <= window.ideg_max);
    if covered && deviations_ok && !series.passed() {
        return Err(Error::Internal("the deviation identity holds but the series identity fails".into()));
    }
    Ok(())
}
