use std::sync::Arc;

use clap::ValueEnum;
use log::info;
use tateforge::invariants::{
    betti_numbers, classify_map, golod_check, koszul_check, poincare_series, poincare_series_from_closure, tor_dims,
    tor_independence_routes, verify_all, verify_poincare_identity, verify_pullback_theorem, ClassifyMode,
};
use tateforge::presentation::{GradedPresentation, SurjectionSpec};
use tateforge::tate::residue_closure;
use tateforge::Error;

use crate::input::{InputError, Problem};
use crate::report::{CommandResult, Report, RingLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Deviations,
    Poincare,
    Betti,
    Tor,
    TorIndependence,
    VerifyPullback,
    VerifyPoincare,
    Koszul,
    Golod,
    Classify,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Engine(#[from] Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Engine(Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

/// The rings of a problem: `R`, then `S1`, `S2` and `S` when the pair ideals are given.
fn rings(p: &Problem) -> Result<Vec<(RingLabel, Arc<GradedPresentation>)>, Error> {
    let label = |name: &str, r: &GradedPresentation| RingLabel { name: name.into(), ideal: r.render_ideal() };
    let mut out = vec![(label("R", &p.base), p.base.clone())];
    let quotient = |gens: &[tateforge::poly::Polynomial]| p.base.quotient(gens).map(Arc::new);
    if let Some(i1) = &p.i1 {
        let s1 = quotient(i1)?;
        out.push((label("S1", &s1), s1));
    }
    if let Some(i2) = &p.i2 {
        let s2 = quotient(i2)?;
        out.push((label("S2", &s2), s2));
    }
    if let (Some(i1), Some(i2)) = (&p.i1, &p.i2) {
        let s = quotient(&[i1.as_slice(), i2.as_slice()].concat())?;
        out.push((label("S", &s), s));
    }
    Ok(out)
}

/// The maps `R -> S1`, `R -> S2`, `R -> S`; without pair ideals, the
/// presentation `P -> R` of the base itself.
fn maps(p: &Problem) -> Result<Vec<(String, SurjectionSpec)>, Error> {
    let mut out = Vec::new();
    if let Some(i1) = &p.i1 {
        out.push(("R -> S1".to_string(), SurjectionSpec::new(p.base.clone(), i1.clone())?));
    }
    if let Some(i2) = &p.i2 {
        out.push(("R -> S2".to_string(), SurjectionSpec::new(p.base.clone(), i2.clone())?));
    }
    if let (Some(i1), Some(i2)) = (&p.i1, &p.i2) {
        out.push(("R -> S".to_string(), SurjectionSpec::new(p.base.clone(), [i1.as_slice(), i2.as_slice()].concat())?));
    }
    if out.is_empty() {
        let ambient = Arc::new(p.base.ambient());
        out.push(("P -> R".to_string(), SurjectionSpec::new(ambient, p.base.ideal().basis().to_vec())?));
    }
    Ok(out)
}

pub fn run_command(cmd: Command, p: &Problem, mode: Option<ClassifyMode>) -> Result<Report, RunError> {
    info!("running {}", cmd.name());
    let mut rep = Report::new(cmd.name(), Some(p.echo()));
    let w = p.window;
    let t = p.series_max;
    let results = &mut rep.results;
    match cmd {
        Command::Deviations => {
            for (ring, pres) in rings(p)? {
                let build = residue_closure(&pres, w)?;
                results.push(CommandResult::Deviations {
                    ring,
                    totals: build.counts.totals(),
                    table: build.counts,
                    flags: build.flags,
                    exhausted: build.exhausted.map(|e| e.message),
                });
            }
        }
        Command::Poincare => {
            for (ring, pres) in rings(p)? {
                let betti_route = poincare_series(&pres, t)?;
                let closure_route = poincare_series_from_closure(&pres, t)?;
                results.push(CommandResult::Poincare {
                    ring,
                    agree: betti_route == closure_route,
                    series: betti_route.to_string(),
                    betti_route,
                    closure_route,
                });
            }
        }
        Command::Betti => {
            for (ring, pres) in rings(p)? {
                results.push(CommandResult::Betti { ring, table: betti_numbers(&pres, w)? });
            }
        }
        Command::Tor => {
            let (a, b) = p.pair()?;
            results.push(CommandResult::Tor { table: tor_dims(&p.base, a, b, w)? });
        }
        Command::TorIndependence => {
            let (a, b) = p.pair()?;
            results.push(CommandResult::TorIndependence(tor_independence_routes(&p.base, a, b, w)?));
        }
        Command::VerifyPullback => {
            let (a, b) = p.pair()?;
            results.push(CommandResult::Theorem(verify_pullback_theorem(&p.base, a, b, w)?));
        }
        Command::VerifyPoincare => {
            let (a, b) = p.pair()?;
            results.push(CommandResult::Theorem(verify_poincare_identity(&p.base, a, b, w, t)?));
        }
        Command::Koszul => {
            for (ring, pres) in rings(p)? {
                results.push(CommandResult::Koszul { ring, verdict: koszul_check(&pres, w)? });
            }
        }
        Command::Golod => {
            for (map, phi) in maps(p)? {
                results.push(CommandResult::Golod { map, check: golod_check(&phi, w)? });
            }
        }
        Command::Classify => {
            let modes = match mode {
                Some(m) => vec![m],
                None => ClassifyMode::ALL.to_vec(),
            };
            for (map, phi) in maps(p)? {
                for m in &modes {
                    let verdict = classify_map(&phi, *m, w)?;
                    results.push(CommandResult::Classify { map: map.clone(), mode: m.name().to_string(), verdict });
                }
            }
        }
        Command::VerifyAll => {
            let (a, b) = p.pair()?;
            results.extend(verify_all(&p.base, a, b, w, t)?.into_iter().map(CommandResult::Theorem));
        }
    }
    Ok(rep)
}
