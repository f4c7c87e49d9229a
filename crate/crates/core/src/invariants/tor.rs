use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::Polynomial;
use crate::poly::{ideal_intersection, ideal_product};
use crate::presentation::{ideal_of, GradedPresentation};
use crate::window::Window;

use super::resolution::{tor_dims, BigradedTable};
use super::verdict::{Verdict, VerdictStatus, Witness};

/// Both Tor-independence routes for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorIndependence {
    /// The exact criterion `I1 ∩ I2 = I1 I2`, run when the base is a polynomial ring.
    pub intersection: Option<Verdict>,
    /// Vanishing of `Tor_{>0}` inside the window.
    pub resolution: Verdict,
    pub tor: BigradedTable,
    /// The routes agree inside the window.
    pub agree: bool,
}

impl TorIndependence {
    /// The exact verdict when there is one, otherwise the windowed one.
    pub fn verdict(&self) -> &Verdict {
        self.intersection.as_ref().unwrap_or(&self.resolution)
    }
}

/// Runs every applicable route and fails if they contradict each other
/// inside the window.
pub fn tor_independence_routes(
    r: &GradedPresentation,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<TorIndependence, Error> {
    let tor = tor_dims(r, i1, i2, window)?;
    let resolution = match tor.first_where(|i, _| i > 0) {
        Some(((hdeg, ideg), v)) => Verdict::with_witness(
            VerdictStatus::NoWithWitness,
            Witness::Bidegree { hdeg, ideg, expected: 0, actual: v as i128 },
            window,
        ),
        None => Verdict::new(VerdictStatus::YesUpToWindow, window),
    };
    let (intersection, agree) = if r.is_polynomial_ring() {
        let a = ideal_of(r, i1)?;
        let b = ideal_of(r, i2)?;
        let meet = ideal_intersection(&a, &b)?;
        let product = ideal_product(&a, &b)?;
        let mut missing = None;
        for g in meet.basis() {
            if !product.contains(g)? {
                let d = g.homogeneous_degree().unwrap_or(0);
                if missing.as_ref().is_none_or(|(e, _): &(u32, _)| d < *e) {
                    missing = Some((d, g.render(r.vars())));
                }
            }
        }
        let verdict = match &missing {
            None => Verdict::new(VerdictStatus::CertifiedYes, window),
            Some((degree, description)) => Verdict::with_witness(
                VerdictStatus::CertifiedNo,
                Witness::Element { degree: *degree, description: description.clone() },
                window,
            )
            .note("I1 ∩ I2 is not contained in I1 I2"),
        };
        // Tor_1 = (I1 ∩ I2) / I1 I2, so a witness of degree d shows up in Tor_{1,d}.
        let agree = match &missing {
            None => resolution.is_yes(),
            Some((d, _)) => resolution.is_yes() == (*d > window.ideg_max || window.hdeg_max == 0),
        };
        (Some(verdict), agree)
    } else {
        (None, true)
    };
    if !agree {
        return Err(Error::Internal(format!(
            "Tor-independence routes disagree: intersection {}, resolution {}",
            intersection.as_ref().map_or("none".to_string(), |v| v.status.to_string()),
            resolution.status
        )));
    }
    Ok(TorIndependence { intersection, resolution, tor, agree })
}

pub fn tor_independence(
    r: &GradedPresentation,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<Verdict, Error> {
    Ok(tor_independence_routes(r, i1, i2, window)?.verdict().clone())
}
