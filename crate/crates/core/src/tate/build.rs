use std::sync::Arc;

use log::{debug, info};

use crate::dg::{DgAlgebra, ExtensionKind, VarKind};
use crate::error::Error;
use crate::field::Field;
use crate::homology::minimal_cycle_generators_with_limit;
use crate::linalg::Subspace;
use crate::presentation::{GradedPresentation, SurjectionSpec};
use crate::window::{Window, DEFAULT_BASIS_LIMIT};

use super::{DeviationTable, Provenance};

/// Where a build stopped before reaching the end of its window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhaustion {
    /// Last homological degree whose variables are complete.
    pub completed: u32,
    pub message: String,
}

/// Result of a staged construction: the algebra, its variable counts and
/// notes about the computation.
#[derive(Clone, Debug)]
pub struct TateBuild {
    pub algebra: DgAlgebra,
    /// Variable counts per bidegree; for a closure of the residue field these are the deviations.
    pub counts: DeviationTable,
    pub window: Window,
    pub flags: Vec<String>,
    pub exhausted: Option<Exhaustion>,
}

impl TateBuild {
    /// Fails if the build stopped early.
    pub fn complete(self) -> Result<TateBuild, Error> {
        match &self.exhausted {
            None => Ok(self),
            Some(e) => Err(Error::Internal(format!("build stopped after degree {}: {}", e.completed, e.message))),
        }
    }
}

/// Options for the staged builders.
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub window: Window,
    /// Largest basis allowed in a single bidegree.
    pub basis_limit: usize,
}

impl BuildOptions {
    pub fn new(window: Window) -> Self {
        BuildOptions { window, basis_limit: DEFAULT_BASIS_LIMIT }
    }
}

/// Acyclic closure of `target.target` over `target.source` (divided-power even variables).
pub fn acyclic_closure(target: &SurjectionSpec, window: Window) -> Result<TateBuild, Error> {
    build(target, BuildOptions::new(window), ExtensionKind::Closure)
}

/// Minimal model of the surjection (polynomial even variables).
pub fn minimal_model(target: &SurjectionSpec, window: Window) -> Result<TateBuild, Error> {
    build(target, BuildOptions::new(window), ExtensionKind::Model)
}

/// Closure of the residue field of `pres`: its deviations are those of the ring.
pub fn residue_closure(pres: &Arc<GradedPresentation>, window: Window) -> Result<TateBuild, Error> {
    acyclic_closure(&SurjectionSpec::to_residue_field(pres.clone())?, window)
}

fn variable_name(stage: u32, k: usize) -> String {
    format!("y{stage}_{k}")
}

/// Shared staged construction: stage 1 kills minimal generators of the
/// kernel, stage `n + 1` kills minimal generators of `H_n`.
pub fn build(target: &SurjectionSpec, options: BuildOptions, kind: ExtensionKind) -> Result<TateBuild, Error> {
    let window = options.window;
    if window.hdeg_max == 0 || window.ideg_max == 0 {
        return Err(Error::InvalidSpec("window bounds must be positive".into()));
    }
    let mut alg = DgAlgebra::new(target.source.clone(), kind, window.ideg_max)?;
    alg.set_target_kernel(target.kernel.clone());
    let mut flags = Vec::new();
    if let (ExtensionKind::Model, Field::Prime(p)) = (kind, alg.field()) {
        if window.hdeg_max >= 2 * p {
            flags.push(format!("experimental: polynomial variables in characteristic {p} beyond degree {}", 2 * p));
        }
    }

    // Stage 1: minimal generators of the kernel, degree by degree.
    let tables = alg.tables().clone();
    let nvars = tables.nvars();
    let mut previous: Vec<crate::linalg::SparseVec> = Vec::new();
    let mut count = 0;
    for j in 1..=window.ideg_max {
        let mut span = Subspace::new(alg.field());
        for v in &previous {
            for i in 0..nvars {
                span.insert(&tables.mul_var(j - 1, v, i));
            }
        }
        let mut fresh = Vec::new();
        for g in target.kernel.iter().filter(|g| g.homogeneous_degree() == Some(j)) {
            if span.insert(&tables.coordinates(g, j)).is_some() {
                fresh.push(g.clone());
            }
        }
        for g in fresh {
            count += 1;
            let d = alg.from_base(&g)?;
            alg.add_variable(variable_name(1, count), 1, j, VarKind::Exterior, d)?;
        }
        previous = span.basis();
    }
    debug!("stage 1: {count} variables");

    let mut exhausted = None;
    for n in 1..window.hdeg_max {
        let gens = match minimal_cycle_generators_with_limit(&alg, n, window, options.basis_limit) {
            Ok(g) => g,
            Err(e @ Error::WindowExhausted { .. }) => {
                info!("stopping after degree {n}: {e}");
                exhausted = Some(Exhaustion { completed: n, message: e.to_string() });
                break;
            }
            Err(e) => return Err(e),
        };
        let stage = n + 1;
        let var_kind = if stage % 2 == 1 { VarKind::Exterior } else { kind.even_kind() };
        debug!("stage {stage}: {} variables", gens.len());
        for (k, g) in gens.into_iter().enumerate() {
            alg.add_variable(variable_name(stage, k + 1), stage, g.ideg, var_kind, g.cycle)?;
        }
    }

    let completed = exhausted.as_ref().map_or(window.hdeg_max, |e| e.completed);
    let provenance = match kind {
        ExtensionKind::Closure => Provenance::ClosureRoute,
        ExtensionKind::Model => Provenance::ModelRoute,
    };
    let counts = DeviationTable::from_variables(
        alg.variables().iter().map(|v| (v.hdeg, v.ideg)),
        Window::new(completed, window.ideg_max),
        provenance,
    );
    Ok(TateBuild { algebra: alg, counts, window, flags, exhausted })
}
