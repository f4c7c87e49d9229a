use std::sync::Arc;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::presentation::{GradedPresentation, SurjectionSpec};
use crate::tate::{acyclic_closure, lift_model_map, minimal_model, residue_closure};
use crate::window::Window;

use super::resolution::{betti_numbers, BigradedTable, Resolution};
use super::series::{poincare_from_deviations, TruncatedSeries};
use super::verdict::{Verdict, VerdictStatus, Witness};

/// Largest internal degree `j` with `Tor^S_{i,j}(k,k) != 0` possible, from the
/// degree `g` of a Gröbner basis of the ideal: `1 + (i - 1)(g - 1)`.
pub fn residue_degree_bound(pres: &GradedPresentation, i: u32) -> u32 {
    let g = pres.groebner_degree().max(2);
    if i == 0 {
        0
    } else {
        1 + (i - 1) * (g - 1)
    }
}

/// Window in which the Betti numbers of `k` through `t^t_max` are complete.
pub fn residue_window(pres: &GradedPresentation, t_max: usize) -> Window {
    let t = t_max.max(1) as u32;
    Window::new(t, residue_degree_bound(pres, t).max(1))
}

/// `P^S_k(t)` through `t^t_max` from the minimal resolution of `k`.
pub fn poincare_series(pres: &GradedPresentation, t_max: usize) -> Result<TruncatedSeries, Error> {
    Ok(betti_numbers(pres, residue_window(pres, t_max))?.series(t_max))
}

/// `P^S_k(t)` through `t^t_max` from the deviations of the acyclic closure of `k`.
pub fn poincare_series_from_closure(pres: &Arc<GradedPresentation>, t_max: usize) -> Result<TruncatedSeries, Error> {
    let build = residue_closure(pres, residue_window(pres, t_max))?.complete()?;
    poincare_from_deviations(&build.counts, t_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifyMode {
    Golod,
    Qci,
    Ci,
    AlmostSmall,
}

impl ClassifyMode {
    pub const ALL: [ClassifyMode; 4] =
        [ClassifyMode::Golod, ClassifyMode::Qci, ClassifyMode::Ci, ClassifyMode::AlmostSmall];

    pub fn name(self) -> &'static str {
        match self {
            ClassifyMode::Golod => "golod",
            ClassifyMode::Qci => "qci",
            ClassifyMode::Ci => "ci",
            ClassifyMode::AlmostSmall => "almost-small",
        }
    }
}

impl std::str::FromStr for ClassifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.replace('_', "-").as_str() {
            "golod" => Ok(ClassifyMode::Golod),
            "qci" => Ok(ClassifyMode::Qci),
            "ci" => Ok(ClassifyMode::Ci),
            "almost-small" => Ok(ClassifyMode::AlmostSmall),
            _ => Err(Error::InvalidSpec(format!("unknown mode `{s}`"))),
        }
    }
}

pub fn classify_map(phi: &SurjectionSpec, mode: ClassifyMode, window: Window) -> Result<Verdict, Error> {
    debug!("classify {}", mode.name());
    match mode {
        ClassifyMode::Golod => Ok(golod_check(phi, window)?.verdict),
        ClassifyMode::Qci => qci(phi, window),
        ClassifyMode::Ci => ci(phi, window),
        ClassifyMode::AlmostSmall => almost_small(phi, window),
    }
}

/// The series entering the Golod comparison for `φ: R -> S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GolodCheck {
    pub verdict: Verdict,
    /// `P^R_k`.
    pub source_series: TruncatedSeries,
    /// `P^R_S`.
    pub relative_series: TruncatedSeries,
    /// `P^R_k / (1 - t (P^R_S - 1))`.
    pub bound: TruncatedSeries,
    /// `P^S_k`.
    pub target_series: TruncatedSeries,
    /// All four series are complete through `t^t_max`.
    pub exact: bool,
}

/// Compares `P^S_k` with the Golod bound through `t^hdeg_max`. With a
/// polynomial source every series is complete and a mismatch is certified.
pub fn golod_check(phi: &SurjectionSpec, window: Window) -> Result<GolodCheck, Error> {
    let t = window.hdeg_max as usize;
    let exact = phi.source.is_polynomial_ring();
    let source_series = poincare_series(&phi.source, t)?;
    let target_series = poincare_series(&phi.target, t)?;
    let tor_window = if exact {
        // Taylor: Tor^P_i(S, k) lives in degrees at most i * D.
        let d = phi.target.groebner_degree().max(1);
        Window::new(window.hdeg_max, (window.hdeg_max * d).max(1))
    } else {
        window
    };
    let relative_series = Resolution::new(&phi.source, &phi.kernel, tor_window)?.betti().series(t);
    let one = TruncatedSeries::one(t);
    let bound = source_series.div(&one.sub(&relative_series.sub(&one)?.shift())?)?;
    if exact {
        if let Some(i) = (0..=t).find(|&i| target_series.coeff(i) > bound.coeff(i)) {
            return Err(Error::Internal(format!(
                "Poincaré series exceeds the Serre bound at t^{i}: {} > {}",
                target_series.coeff(i),
                bound.coeff(i)
            )));
        }
    }
    let verdict = match bound.first_difference(&target_series) {
        Some(index) => {
            let status = if exact { VerdictStatus::CertifiedNo } else { VerdictStatus::NoWithWitness };
            let witness =
                Witness::Coefficient { index, expected: bound.coeff(index), actual: target_series.coeff(index) };
            Verdict::with_witness(status, witness, window)
        }
        None => Verdict::new(VerdictStatus::YesUpToWindow, window),
    };
    let verdict =
        if exact { verdict } else { verdict.note("Tor of the target over the source is truncated to the window") };
    Ok(GolodCheck { verdict, source_series, relative_series, bound, target_series, exact })
}

fn first_variable(counts: &crate::tate::DeviationTable, pred: impl Fn(u32) -> bool) -> Option<Witness> {
    counts.nonzero().find(|&((i, _), _)| pred(i)).map(|((hdeg, ideg), v)| Witness::Bidegree {
        hdeg,
        ideg,
        expected: 0,
        actual: v as i128,
    })
}

fn qci(phi: &SurjectionSpec, window: Window) -> Result<Verdict, Error> {
    if phi.degenerate {
        return Ok(Verdict::new(VerdictStatus::CertifiedYes, window).note("the map is an isomorphism"));
    }
    let closure = acyclic_closure(phi, window)?.complete()?;
    Ok(match first_variable(&closure.counts, |i| i >= 3) {
        Some(w) => Verdict::with_witness(VerdictStatus::NoWithWitness, w, window),
        None => Verdict::new(VerdictStatus::YesUpToWindow, window),
    })
}

fn ci(phi: &SurjectionSpec, window: Window) -> Result<Verdict, Error> {
    if phi.degenerate {
        return Ok(Verdict::new(VerdictStatus::CertifiedYes, window).note("the map is an isomorphism"));
    }
    let closure = acyclic_closure(phi, window)?.complete()?;
    if let Some(w) = first_variable(&closure.counts, |i| i >= 2) {
        return Ok(Verdict::with_witness(VerdictStatus::NoWithWitness, w, window));
    }
    let c = closure.counts.total(1) as u32;
    let tor = Resolution::new(&phi.source, &phi.kernel, Window::new(c + 1, window.ideg_max))?.betti();
    if let Some(((hdeg, ideg), v)) = tor.first_where(|i, _| i == c + 1) {
        return Ok(Verdict::with_witness(
            VerdictStatus::NoWithWitness,
            Witness::Bidegree { hdeg, ideg, expected: 0, actual: v as i128 },
            window,
        ));
    }
    Ok(Verdict::new(VerdictStatus::YesUpToWindow, window))
}

fn almost_small(phi: &SurjectionSpec, window: Window) -> Result<Verdict, Error> {
    if phi.source.is_polynomial_ring() {
        return Ok(Verdict::new(VerdictStatus::CertifiedYes, window).note("the source is regular"));
    }
    let ambient = Arc::new(phi.source.ambient());
    let model_window = Window::new(window.hdeg_max.saturating_sub(1).max(1), window.ideg_max);
    let spec_r = SurjectionSpec::new(ambient.clone(), phi.source.ideal().basis().to_vec())?;
    let spec_s = SurjectionSpec::new(ambient, phi.target.ideal().basis().to_vec())?;
    let model_r = minimal_model(&spec_r, model_window)?.complete()?;
    let model_s = minimal_model(&spec_s, model_window)?.complete()?;
    let ind = lift_model_map(&model_r.algebra, &model_s.algebra)?;
    for block in ind.blocks.values() {
        if block.rank < block.cols.len() {
            // Model variables in degree n are dual to π^{n+1}.
            let witness = Witness::Bidegree {
                hdeg: block.hdeg + 1,
                ideg: block.ideg,
                expected: block.cols.len() as i128,
                actual: block.rank as i128,
            };
            return Ok(Verdict::with_witness(VerdictStatus::NoWithWitness, witness, window));
        }
    }
    Ok(Verdict::new(VerdictStatus::YesUpToWindow, window))
}

/// First off-diagonal entry `(i, j)`, `i != j`, with `i >= from`.
fn off_diagonal(table: impl Iterator<Item = ((u32, u32), u64)>, from: u32) -> Option<((u32, u32), u64)> {
    table.into_iter().find(|&((i, j), _)| i >= from && i != j)
}

/// The two Koszul routes side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulCheck {
    pub verdict: Verdict,
    pub betti: BigradedTable,
    /// First off-diagonal Betti number.
    pub betti_witness: Option<(u32, u32)>,
    /// First off-diagonal deviation in homological degree at least two.
    pub deviation_witness: Option<(u32, u32)>,
}

pub fn koszul_check(pres: &Arc<GradedPresentation>, window: Window) -> Result<Verdict, Error> {
    Ok(koszul_routes(pres, window)?.verdict)
}

/// Runs both routes (linearity of the resolution of `k`, diagonal deviations)
/// and fails if they disagree.
pub fn koszul_routes(pres: &Arc<GradedPresentation>, window: Window) -> Result<KoszulCheck, Error> {
    let betti = betti_numbers(pres, window)?;
    let closure = residue_closure(pres, window)?.complete()?;
    let b = off_diagonal(betti.nonzero(), 0);
    let d = off_diagonal(closure.counts.nonzero(), 2);
    let quadratic = pres.groebner_degree() <= 2;
    if b.is_some() != d.is_some() || (quadratic && b.is_some()) {
        return Err(Error::Internal(format!("Koszul routes disagree: Betti {b:?}, deviations {d:?}")));
    }
    let verdict = match b {
        Some(((hdeg, ideg), v)) => {
            let w = Witness::Bidegree { hdeg, ideg, expected: 0, actual: v as i128 };
            let ((i, j), e) = d.expect("routes agree");
            Verdict::with_witness(VerdictStatus::NoWithWitness, w, window)
                .note(format!("first off-diagonal deviation: ε_({i},{j}) = {e}"))
        }
        None if quadratic => {
            Verdict::new(VerdictStatus::CertifiedYes, window).note("the ideal has a quadratic Gröbner basis")
        }
        None => Verdict::new(VerdictStatus::YesUpToWindow, window),
    };
    Ok(KoszulCheck { verdict, betti, betti_witness: b.map(|(k, _)| k), deviation_witness: d.map(|(k, _)| k) })
}
