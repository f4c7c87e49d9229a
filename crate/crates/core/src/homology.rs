//! Bidegree-wise homology of DG algebras and minimal generators of homology
//! as a module over the base.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dg::{BidegreeBasis, DgAlgebra, DgElement};
use crate::error::Error;
use crate::field::Scalar;
use crate::linalg::{rank_and_kernel, SparseVec, Subspace};
use crate::poly::Monomial;
use crate::window::{Window, DEFAULT_BASIS_LIMIT};

/// The differential `(n, j) -> (n - 1, j)` in the canonical bases.
#[derive(Clone, Debug)]
pub struct BidegreeMatrix {
    pub hdeg: u32,
    pub ideg: u32,
    pub source: BidegreeBasis,
    pub target: BidegreeBasis,
    pub columns: Vec<SparseVec>,
}

impl BidegreeMatrix {
    pub fn differential(alg: &DgAlgebra, hdeg: u32, ideg: u32) -> BidegreeMatrix {
        let source = alg.basis_of_bidegree(hdeg, ideg);
        let (target, columns) = if hdeg == 0 {
            (BidegreeBasis::empty(0, ideg), vec![Vec::new(); source.len()])
        } else {
            let target = alg.basis_of_bidegree(hdeg - 1, ideg);
            let columns = alg.differential_matrix(&source, &target);
            (target, columns)
        };
        BidegreeMatrix { hdeg, ideg, source, target, columns }
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&Scalar> {
        self.columns[col].iter().find(|(i, _)| *i == row).map(|(_, c)| c)
    }

    /// Row-major dense form; zero entries as `None`.
    pub fn dense(&self) -> Vec<Vec<Option<Scalar>>> {
        let mut out = vec![vec![None; self.cols()]; self.rows()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                out[*i][j] = Some(c.clone());
            }
        }
        out
    }
}

/// `dim H_{n,j}` over a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub window: Window,
    pub dims: BTreeMap<(u32, u32), usize>,
}

impl HomologyTable {
    pub fn get(&self, n: u32, j: u32) -> usize {
        self.dims.get(&(n, j)).copied().unwrap_or(0)
    }

    /// Bidegrees with nonzero homology in positive homological degree.
    pub fn higher_support(&self) -> Vec<(u32, u32)> {
        self.dims.iter().filter(|(k, v)| k.0 > 0 && **v > 0).map(|(k, _)| *k).collect()
    }
}

/// Cycles and boundaries of one bidegree.
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    pub basis: BidegreeBasis,
    pub cycles: Vec<SparseVec>,
    pub boundaries: Subspace,
}

pub(crate) fn check_size(alg: &DgAlgebra, stage: u32, n: u32, j: u32, limit: usize) -> Result<(), Error> {
    let size: usize = alg.words(n, j).iter().map(|w| alg.tables().dim(j - w.ideg(alg.variables()))).sum();
    if size > limit {
        return Err(Error::WindowExhausted { stage, hdeg: n, ideg: j, size, limit });
    }
    Ok(())
}

fn check_table(alg: &DgAlgebra, window: Window) -> Result<(), Error> {
    if window.ideg_max > alg.max_ideg() {
        return Err(Error::BeyondTable { requested: window.ideg_max, available: alg.max_ideg() });
    }
    Ok(())
}

/// Cycles and boundaries in bidegree `(n, j)`; a size overflow is reported
/// against stage `n + 1`, the one that kills `H_n`.
pub(crate) fn slice(alg: &DgAlgebra, n: u32, j: u32, limit: usize) -> Result<Slice, Error> {
    for h in [n, n + 1] {
        check_size(alg, n + 1, h, j, limit)?;
    }
    let field = alg.field();
    let basis = alg.basis_of_bidegree(n, j);
    let cycles = if n == 0 {
        (0..basis.len()).map(|i| vec![(i, field.one())]).collect()
    } else {
        let low = alg.basis_of_bidegree(n - 1, j);
        rank_and_kernel(field, &alg.differential_matrix(&basis, &low)).1
    };
    let high = alg.basis_of_bidegree(n + 1, j);
    let mut boundaries = Subspace::new(field);
    for col in alg.differential_matrix(&high, &basis) {
        boundaries.insert(&col);
    }
    Ok(Slice { basis, cycles, boundaries })
}

/// `dim ker d_{n,j} - dim im d_{n+1,j}` for every bidegree of the window.
pub fn homology_dims(alg: &DgAlgebra, window: Window) -> Result<HomologyTable, Error> {
    check_table(alg, window)?;
    let keys: Vec<(u32, u32)> =
        (0..=window.hdeg_max).flat_map(|n| (0..=window.ideg_max).map(move |j| (n, j))).collect();
    let dims = keys
        .par_iter()
        .map(|&(n, j)| slice(alg, n, j, DEFAULT_BASIS_LIMIT).map(|s| ((n, j), s.cycles.len() - s.boundaries.dim())))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    Ok(HomologyTable { window, dims })
}

/// A cycle whose class is a minimal generator of homology in internal degree `ideg`.
#[derive(Clone, Debug)]
pub struct CycleGenerator {
    pub ideg: u32,
    pub cycle: DgElement,
}

/// Products `x_i * z` of base variables with the cycles of the previous degree,
/// in coordinates of `target`.
pub(crate) fn decomposables(alg: &DgAlgebra, prev: &Slice, target: &BidegreeBasis) -> Vec<SparseVec> {
    let nvars = alg.base().nvars();
    let mut out = Vec::new();
    for z in &prev.cycles {
        let e = alg.element(&prev.basis, z);
        for i in 0..nvars {
            let p = alg.mul_base(&Monomial::variable(nvars, i), &e);
            if !p.is_zero() {
                out.push(alg.coordinates(&p, target));
            }
        }
    }
    out
}

/// Cycles among `candidates` independent modulo `span(known)`, chosen greedily
/// in order.
pub(crate) fn independent_modulo(known: Subspace, candidates: &[SparseVec]) -> Vec<SparseVec> {
    let mut space = known;
    candidates.iter().filter(|z| space.insert(z).is_some()).cloned().collect()
}

/// Minimal generators of `H_n` as a module over the base, per internal degree
/// up to `window.ideg_max`: cycles whose classes span `H_{n,j} / (m H_n)_j`.
pub fn minimal_cycle_generators(alg: &DgAlgebra, n: u32, window: Window) -> Result<Vec<CycleGenerator>, Error> {
    minimal_cycle_generators_with_limit(alg, n, window, DEFAULT_BASIS_LIMIT)
}

pub(crate) fn minimal_cycle_generators_with_limit(
    alg: &DgAlgebra,
    n: u32,
    window: Window,
    limit: usize,
) -> Result<Vec<CycleGenerator>, Error> {
    check_table(alg, window)?;
    let slices =
        (0..=window.ideg_max).into_par_iter().map(|j| slice(alg, n, j, limit)).collect::<Result<Vec<_>, Error>>()?;
    let per_degree: Vec<Vec<CycleGenerator>> = (0..=window.ideg_max)
        .into_par_iter()
        .map(|j| {
            let s = &slices[j as usize];
            let mut known = s.boundaries.clone();
            if j > 0 {
                for v in decomposables(alg, &slices[j as usize - 1], &s.basis) {
                    known.insert(&v);
                }
            }
            independent_modulo(known, &s.cycles)
                .into_iter()
                .map(|z| CycleGenerator { ideg: j, cycle: alg.element(&s.basis, &z) })
                .collect()
        })
        .collect();
    Ok(per_degree.into_iter().flatten().collect())
}
