//! Minimal graded free resolutions of cyclic modules `R/J`, computed degree
//! by degree, and the Tor tables derived from them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{rank, rank_and_kernel, sparse_from_entries, SparseVec, Subspace};
use crate::poly::Polynomial;
use crate::presentation::{GradedPresentation, RingTables, ORDER};
use crate::window::{Window, DEFAULT_BASIS_LIMIT};

use super::series::{BigradedSeries, TruncatedSeries};

/// Nonnegative integers indexed by bidegree `(i, j)` inside a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedTable {
    pub window: Window,
    #[serde(with = "crate::window::bigraded_entries")]
    entries: BTreeMap<(u32, u32), u64>,
}

impl BigradedTable {
    pub fn new(window: Window) -> Self {
        BigradedTable { window, entries: BTreeMap::new() }
    }

    pub fn get(&self, i: u32, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: u32, j: u32, v: u64) {
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn total(&self, i: u32) -> u64 {
        self.entries.range((i, 0)..=(i, u32::MAX)).map(|(_, v)| v).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// First nonzero entry (in `(i, j)` order) satisfying `pred`.
    pub fn first_where(&self, pred: impl Fn(u32, u32) -> bool) -> Option<((u32, u32), u64)> {
        self.nonzero().find(|&((i, j), _)| pred(i, j))
    }

    /// `sum_j table_{i,j} t^i` through `t^t_max`.
    pub fn series(&self, t_max: usize) -> TruncatedSeries {
        let coeffs = (0..=t_max as u32).map(|i| self.total(i) as i128).collect();
        TruncatedSeries::new(coeffs, t_max)
    }

    pub fn bigraded_series(&self) -> BigradedSeries {
        let mut s = BigradedSeries::new(self.window);
        for ((i, j), v) in self.nonzero() {
            s.set(i, j, v as i128);
        }
        s
    }
}

/// A generator of `F_i`: its internal degree and its image in `F_{i-1}`,
/// split into blocks `(generator of F_{i-1}, vector over R_{degree - deg h})`.
#[derive(Clone, Debug)]
struct Generator {
    degree: u32,
    image: Vec<(usize, SparseVec)>,
}

/// The minimal graded free resolution `F` of `R/J` over `R`, through
/// homological degree `hdeg_max + 1` and internal degree `ideg_max`.
#[derive(Clone, Debug)]
pub struct Resolution {
    tables: Arc<RingTables>,
    window: Window,
    gens: Vec<Vec<Generator>>,
}

/// Block layout of `(F_i ⊗ T)_j`: one block of `T_{j - deg g}` per generator.
struct Layout {
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn new(gens: &[Generator], tables: &RingTables, j: u32) -> Self {
        let mut offsets = Vec::with_capacity(gens.len());
        let mut len = 0;
        for g in gens {
            offsets.push(len);
            if g.degree <= j {
                len += tables.dim(j - g.degree);
            }
        }
        Layout { offsets, len }
    }

    /// Splits a vector into per-generator blocks.
    fn split(&self, v: &SparseVec) -> Vec<(usize, SparseVec)> {
        let mut out: Vec<(usize, SparseVec)> = Vec::new();
        for (idx, c) in v {
            let g = self.offsets.partition_point(|&o| o <= *idx) - 1;
            let entry = (idx - self.offsets[g], c.clone());
            match out.last_mut() {
                Some((last, block)) if *last == g => block.push(entry),
                _ => out.push((g, vec![entry])),
            }
        }
        out
    }
}

/// Images of generators rewritten over the normal monomials of `T`.
type ConvertedImages = Vec<Vec<(usize, u32, SparseVec)>>;

fn convert_images(r: &RingTables, t: &RingTables, current: &[Generator], lower: &[Generator]) -> ConvertedImages {
    current
        .iter()
        .map(|g| {
            g.image
                .iter()
                .map(|(h, vec)| {
                    let e = g.degree - lower[*h].degree;
                    let mut entries = Vec::new();
                    for (k, c) in vec {
                        for (s, a) in t.normal_form_monomial(&r.basis(e)[*k]) {
                            entries.push((s, &a * c));
                        }
                    }
                    (*h, e, sparse_from_entries(entries))
                })
                .collect()
        })
        .collect()
}

/// Columns of `F_i ⊗ T -> F_{i-1} ⊗ T` in internal degree `j`.
fn columns(t: &RingTables, current: &[Generator], images: &ConvertedImages, dst: &Layout, j: u32) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for (g, image) in current.iter().zip(images) {
        if g.degree > j {
            continue;
        }
        for m in t.basis(j - g.degree) {
            let mut entries = Vec::new();
            for (h, e, vec) in image {
                for (k, c) in vec {
                    for (s, a) in t.mul_monomial(*e, *k, m) {
                        entries.push((dst.offsets[*h] + s, &a * c));
                    }
                }
            }
            out.push(sparse_from_entries(entries));
        }
    }
    out
}

impl Resolution {
    /// Resolves `R/J` for `J` generated by the homogeneous `kernel` (ambient
    /// polynomials, read in `R`).
    pub fn new(base: &GradedPresentation, kernel: &[Polynomial], window: Window) -> Result<Resolution, Error> {
        Self::with_limit(base, kernel, window, DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(
        base: &GradedPresentation,
        kernel: &[Polynomial],
        window: Window,
        limit: usize,
    ) -> Result<Resolution, Error> {
        let tables = Arc::new(RingTables::new(base, window.ideg_max)?);
        let field = base.field();
        let nvars = tables.nvars();
        let dmax = window.ideg_max;
        let mut reduced = Vec::new();
        for g in kernel {
            let g = base.reduce(g)?;
            if g.is_zero() {
                continue;
            }
            match g.homogeneous_degree() {
                Some(0) => return Err(Error::InvalidSpec("the ideal contains a unit".into())),
                Some(_) => reduced.push(g),
                None => return Err(Error::InvalidSpec(format!("`{}` is not homogeneous", g.render(base.vars())))),
            }
        }

        // Minimal generators of J, degree by degree.
        let mut first = Vec::new();
        let mut previous: Vec<SparseVec> = Vec::new();
        for j in 1..=dmax {
            let mut span = Subspace::new(field);
            for v in &previous {
                for l in 0..nvars {
                    span.insert(&tables.mul_var(j - 1, v, l));
                }
            }
            for g in reduced.iter().filter(|g| g.homogeneous_degree() == Some(j)) {
                let coords = tables.coordinates(g, j);
                if span.insert(&coords).is_some() {
                    first.push(Generator { degree: j, image: vec![(0, coords)] });
                }
            }
            previous = span.basis();
        }
        let mut gens = vec![vec![Generator { degree: 0, image: Vec::new() }], first];

        for i in 1..=window.hdeg_max {
            let current = &gens[i as usize];
            let lower = &gens[i as usize - 1];
            let images = convert_images(&tables, &tables, current, lower);
            let kernels = (0..=dmax)
                .into_par_iter()
                .map(|j| {
                    let src = Layout::new(current, &tables, j);
                    if src.len > limit {
                        return Err(Error::WindowExhausted { stage: i + 1, hdeg: i, ideg: j, size: src.len, limit });
                    }
                    let dst = Layout::new(lower, &tables, j);
                    let cols = columns(&tables, current, &images, &dst, j);
                    Ok((src, rank_and_kernel(field, &cols).1))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let next: Vec<Vec<Generator>> = (0..=dmax)
                .into_par_iter()
                .map(|j| {
                    let (src, kernel) = &kernels[j as usize];
                    let mut known = Subspace::new(field);
                    if j > 0 {
                        let (prev, prev_kernel) = &kernels[j as usize - 1];
                        for z in prev_kernel {
                            let blocks = prev.split(z);
                            for l in 0..nvars {
                                let mut entries = Vec::new();
                                for (g, block) in &blocks {
                                    let moved = tables.mul_var(j - 1 - current[*g].degree, block, l);
                                    entries.extend(moved.into_iter().map(|(k, c)| (k + src.offsets[*g], c)));
                                }
                                known.insert(&sparse_from_entries(entries));
                            }
                        }
                    }
                    kernel
                        .iter()
                        .filter(|z| known.insert(z).is_some())
                        .map(|z| Generator { degree: j, image: src.split(z) })
                        .collect()
                })
                .collect();
            gens.push(next.into_iter().flatten().collect());
        }
        Ok(Resolution { tables, window, gens })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// `β_{i,j} = dim Tor^R_{i,j}(R/J, k)` within the window.
    pub fn betti(&self) -> BigradedTable {
        let mut t = BigradedTable::new(self.window);
        for (i, gs) in self.gens.iter().enumerate().take(self.window.hdeg_max as usize + 1) {
            for g in gs {
                t.set(i as u32, g.degree, t.get(i as u32, g.degree) + 1);
            }
        }
        t
    }

    /// `dim Tor^R_{i,j}(R/J, R/J')` where `other` presents `R/J'` over the same
    /// ambient ring (its ideal contains that of `R`).
    pub fn tor_with(&self, other: &GradedPresentation) -> Result<BigradedTable, Error> {
        let w = self.window;
        let t = RingTables::new(other, w.ideg_max)?;
        let field = t.field();
        let images: Vec<ConvertedImages> = (1..=w.hdeg_max as usize + 1)
            .map(|i| convert_images(&self.tables, &t, &self.gens[i], &self.gens[i - 1]))
            .collect();
        let keys: Vec<(u32, u32)> = (0..=w.hdeg_max + 1).flat_map(|i| (0..=w.ideg_max).map(move |j| (i, j))).collect();
        let data: BTreeMap<(u32, u32), (usize, usize)> = keys
            .into_par_iter()
            .map(|(i, j)| {
                let cur = &self.gens[i as usize];
                let src = Layout::new(cur, &t, j);
                let r = if i == 0 {
                    0
                } else {
                    let dst = Layout::new(&self.gens[i as usize - 1], &t, j);
                    rank(field, &columns(&t, cur, &images[i as usize - 1], &dst, j))
                };
                ((i, j), (src.len, r))
            })
            .collect();
        let mut out = BigradedTable::new(w);
        for i in 0..=w.hdeg_max {
            for j in 0..=w.ideg_max {
                let (dim, r) = data[&(i, j)];
                out.set(i, j, (dim - r - data[&(i + 1, j)].1) as u64);
            }
        }
        Ok(out)
    }
}

/// Bigraded Betti numbers `dim Tor^S_{i,j}(k, k)` from the minimal resolution of `k`.
pub fn betti_numbers(pres: &GradedPresentation, window: Window) -> Result<BigradedTable, Error> {
    Ok(Resolution::new(pres, &residue_ideal(pres), window)?.betti())
}

pub(crate) fn residue_ideal(pres: &GradedPresentation) -> Vec<Polynomial> {
    let n = pres.nvars();
    (0..n).map(|i| Polynomial::variable(n, i, ORDER, pres.field())).collect()
}

/// `dim Tor^R_{i,j}(R/I1, R/I2)` within the window.
pub fn tor_dims(
    r: &GradedPresentation,
    i1: &[Polynomial],
    i2: &[Polynomial],
    window: Window,
) -> Result<BigradedTable, Error> {
    let s2 = r.quotient(i2)?;
    Resolution::new(r, i1, window)?.tor_with(&s2)
}
