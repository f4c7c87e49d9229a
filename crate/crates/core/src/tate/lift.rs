use std::collections::BTreeMap;

use crate::dg::{DgAlgebra, DgElement, VarKind, Word};
use crate::error::Error;
use crate::field::Scalar;
use crate::linalg::{rank, solve, SparseVec};
use crate::poly::Monomial;

/// `ind_k ψ` in one bidegree: rows are target variables, columns source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndBlock {
    pub hdeg: u32,
    pub ideg: u32,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
}

impl IndBlock {
    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SparseVec> {
        (0..self.cols.len())
            .map(|c| {
                (0..self.rows.len())
                    .filter(|&r| !self.matrix[r][c].is_zero())
                    .map(|r| (r, self.matrix[r][c].clone()))
                    .collect()
            })
            .collect()
    }
}

/// The induced maps on indecomposables, per bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndMapMatrices {
    pub blocks: BTreeMap<(u32, u32), IndBlock>,
}

impl IndMapMatrices {
    pub fn block(&self, hdeg: u32, ideg: u32) -> Option<&IndBlock> {
        self.blocks.get(&(hdeg, ideg))
    }
}

/// Image of a source element under the partially built lift.
fn push_forward(source: &DgAlgebra, target: &DgAlgebra, images: &[DgElement], e: &DgElement) -> DgElement {
    let mut out = target.zero();
    for (t, c) in e.terms() {
        let mut acc = target.term(Word::empty(), t.mono.clone(), c.clone());
        for (v, exp) in t.word.factors() {
            debug_assert!(source.variables()[v].kind != VarKind::Divided);
            for _ in 0..exp {
                acc = target.multiply(&acc, &images[v]).expect("same algebra");
            }
        }
        out = out.add(&acc);
    }
    out
}

/// Lifts the identity of the common base to a DG algebra map from `source`
/// to `target`, variable by variable, and returns `ind_k` of the lift.
///
/// Both algebras must be semifree extensions (no divided powers) of the same
/// base, and `target` must be acyclic in positive degrees through the
/// bidegrees of the source variables.
pub fn lift_model_map(source: &DgAlgebra, target: &DgAlgebra) -> Result<IndMapMatrices, Error> {
    if source.base() != target.base() {
        return Err(Error::SpecMismatch);
    }
    if source.variables().iter().any(|v| v.kind == VarKind::Divided) {
        return Err(Error::InvalidSpec("lifts are computed for models without divided powers".into()));
    }
    let field = target.field();
    let mut images: Vec<DgElement> = Vec::with_capacity(source.variables().len());
    for v in source.variables() {
        if v.ideg > target.max_ideg() {
            return Err(Error::BeyondTable { requested: v.ideg, available: target.max_ideg() });
        }
        let rhs = push_forward(source, target, &images, source.differential_of(v.index));
        let top = target.basis_of_bidegree(v.hdeg, v.ideg);
        let low = target.basis_of_bidegree(v.hdeg - 1, v.ideg);
        let columns = target.differential_matrix(&top, &low);
        let b = target.coordinates(&rhs, &low);
        let x = solve(field, &columns, &b).ok_or_else(|| Error::NoLift {
            variable: v.name.clone(),
            hdeg: v.hdeg,
            ideg: v.ideg,
        })?;
        images.push(target.element(&top, &x));
    }

    let one = Monomial::one(target.base().nvars());
    let mut keys: Vec<(u32, u32)> =
        source.variables().iter().chain(target.variables()).map(|v| (v.hdeg, v.ideg)).collect();
    keys.sort();
    keys.dedup();
    let mut blocks = BTreeMap::new();
    for (n, j) in keys {
        let rows = target.variables_in_bidegree(n, j);
        let cols = source.variables_in_bidegree(n, j);
        let matrix: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|&r| {
                let w = Word::single(r, 1);
                cols.iter().map(|&c| images[c].coefficient(&w, &one).cloned().unwrap_or_else(|| field.zero())).collect()
            })
            .collect();
        let mut block = IndBlock {
            hdeg: n,
            ideg: j,
            rows: rows.iter().map(|&r| target.variables()[r].name.clone()).collect(),
            cols: cols.iter().map(|&c| source.variables()[c].name.clone()).collect(),
            matrix,
            rank: 0,
        };
        block.rank = rank(field, &block.columns());
        blocks.insert((n, j), block);
    }
    Ok(IndMapMatrices { blocks })
}
