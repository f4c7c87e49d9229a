//! Acyclic closures and minimal models built stage by stage inside a window,
//! their indecomposables, tensor products and lifted maps.

mod build;
mod lift;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dg::{DgAlgebra, DgElement, Term};
use crate::error::Error;
use crate::homology::homology_dims;
use crate::window::Window;

pub use build::{acyclic_closure, build, minimal_model, residue_closure, BuildOptions, Exhaustion, TateBuild};
pub use lift::{lift_model_map, IndBlock, IndMapMatrices};

/// How a deviation table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosureRoute,
    ModelRoute,
    SeriesInversionRoute,
}

/// Bigraded counts `ε_{i,j}` inside a window. Entries outside the window are
/// unknown; totals are sums within the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationTable {
    pub window: Window,
    pub provenance: Provenance,
    #[serde(with = "crate::window::bigraded_entries")]
    entries: BTreeMap<(u32, u32), u64>,
}

impl DeviationTable {
    pub fn new(window: Window, provenance: Provenance) -> Self {
        DeviationTable { window, provenance, entries: BTreeMap::new() }
    }

    pub fn from_variables(vars: impl Iterator<Item = (u32, u32)>, window: Window, provenance: Provenance) -> Self {
        let mut t = DeviationTable::new(window, provenance);
        for (i, j) in vars {
            if window.contains(i, j) {
                *t.entries.entry((i, j)).or_insert(0) += 1;
            }
        }
        t
    }

    pub fn get(&self, i: u32, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: u32, j: u32, value: u64) {
        if value == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// `ε_i` summed over internal degrees in the window.
    pub fn total(&self, i: u32) -> u64 {
        self.entries.range((i, 0)..=(i, u32::MAX)).map(|(_, v)| v).sum()
    }

    /// `[ε_1, ..., ε_{hdeg_max}]` within the window.
    pub fn totals(&self) -> Vec<u64> {
        (1..=self.window.hdeg_max).map(|i| self.total(i)).collect()
    }

    /// Nonzero entries in increasing bidegree order.
    pub fn nonzero(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// The same counts restricted to a smaller window.
    pub fn restrict(&self, window: Window) -> DeviationTable {
        let mut t = DeviationTable::new(window, self.provenance);
        for ((i, j), v) in self.nonzero() {
            if window.contains(i, j) {
                t.set(i, j, v);
            }
        }
        t
    }

    /// First bidegree where the tables differ, over the common window.
    pub fn first_difference(&self, other: &DeviationTable) -> Option<(u32, u32)> {
        let w = Window::new(
            self.window.hdeg_max.min(other.window.hdeg_max),
            self.window.ideg_max.min(other.window.ideg_max),
        );
        (1..=w.hdeg_max)
            .flat_map(|i| (0..=w.ideg_max).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }
}

/// Deviations of `S = P/I` read off a minimal model over the polynomial ring
/// `P` of a minimal presentation (`I ⊆ m^2`): `ε_{1,1} = edim S` and
/// `ε_{n+1,j}` is the number of model variables in bidegree `(n, j)`.
pub fn deviations_from_model(model: &TateBuild, edim: usize) -> DeviationTable {
    let w = model.counts.window;
    let window = Window::new(w.hdeg_max + 1, w.ideg_max);
    let mut t = DeviationTable::new(window, Provenance::ModelRoute);
    t.set(1, 1, edim as u64);
    for ((n, j), v) in model.counts.nonzero() {
        t.set(n + 1, j, v);
    }
    t
}

/// Result of the minimality test `d(k ⊗ A) ⊆ (X)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub passed: bool,
    /// The first variable whose differential has a unit or linear term, with that term.
    pub counterexample: Option<(String, String)>,
}

fn linear_or_unit(d: &DgElement) -> Option<Term> {
    d.terms()
        .find(|(t, _)| t.mono.is_one() && (t.word.is_empty() || t.word.as_variable().is_some()))
        .map(|(t, _)| t.clone())
}

/// Checks, variable by variable, that the differential reduced over `k` has
/// no constant and no single-variable term.
pub fn certify_minimality(alg: &DgAlgebra) -> MinimalityCertificate {
    for v in alg.variables() {
        let d = alg.differential_of(v.index);
        if let Some(t) = linear_or_unit(d) {
            let term = if t.word.is_empty() { "1".to_string() } else { t.word.render(alg.variables()) };
            return MinimalityCertificate { passed: false, counterexample: Some((v.name.clone(), term)) };
        }
    }
    MinimalityCertificate { passed: true, counterexample: None }
}

/// Dimensions of `ind_k k[X]` per bidegree together with the certificate that
/// its induced differential vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndecomposableComplex {
    pub dims: BTreeMap<(u32, u32), usize>,
    pub certificate: MinimalityCertificate,
}

pub fn indecomposable_complex(alg: &DgAlgebra) -> IndecomposableComplex {
    let mut dims = BTreeMap::new();
    for v in alg.variables() {
        *dims.entry((v.hdeg, v.ideg)).or_insert(0) += 1;
    }
    IndecomposableComplex { dims, certificate: certify_minimality(alg) }
}

/// The tensor product of two extensions of the same base.
#[derive(Clone, Debug)]
pub struct TensorModel {
    pub algebra: DgAlgebra,
    /// `H_{>0} = 0` inside the window.
    pub acyclic_in_window: bool,
    pub minimal: bool,
}

/// `A_1 ⊗_R A_2`: disjoint union of the variables, differentials inherited,
/// variables renamed `y{n}_{k}` in the merged order.
pub fn tensor_models(a: &DgAlgebra, b: &DgAlgebra, window: Window) -> Result<TensorModel, Error> {
    if a.base() != b.base() || a.kind() != b.kind() {
        return Err(Error::SpecMismatch);
    }
    let mut order: Vec<(u32, usize, usize)> = a
        .variables()
        .iter()
        .map(|v| (v.hdeg, 0, v.index))
        .chain(b.variables().iter().map(|v| (v.hdeg, 1, v.index)))
        .collect();
    order.sort();
    let mut map_a = vec![0; a.variables().len()];
    let mut map_b = vec![0; b.variables().len()];
    let mut variables = Vec::with_capacity(order.len());
    let mut per_stage: BTreeMap<u32, usize> = BTreeMap::new();
    for (pos, &(h, src, i)) in order.iter().enumerate() {
        let k = per_stage.entry(h).or_insert(0);
        *k += 1;
        let mut v = if src == 0 { a.variables()[i].clone() } else { b.variables()[i].clone() };
        v.name = format!("y{h}_{k}");
        v.index = pos;
        variables.push(v);
        if src == 0 {
            map_a[i] = pos;
        } else {
            map_b[i] = pos;
        }
    }
    let tables = if a.max_ideg() <= b.max_ideg() { a.tables().clone() } else { b.tables().clone() };
    let mut out = DgAlgebra::from_parts(a.base().clone(), tables, a.kind(), variables);
    let differentials: Vec<DgElement> = order
        .iter()
        .map(|&(_, src, i)| {
            if src == 0 {
                a.relabel(a.differential_of(i), &map_a, &out)
            } else {
                b.relabel(b.differential_of(i), &map_b, &out)
            }
        })
        .collect();
    out.set_differentials(differentials);
    let mut kernel = a.target_kernel().to_vec();
    kernel.extend(b.target_kernel().iter().cloned());
    out.set_target_kernel(kernel);
    let h = homology_dims(&out, window)?;
    let acyclic_in_window = h.higher_support().is_empty();
    let minimal = certify_minimality(&out).passed;
    Ok(TensorModel { algebra: out, acyclic_in_window, minimal })
}
