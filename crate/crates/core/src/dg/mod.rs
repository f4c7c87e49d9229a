//! Free graded-commutative DG algebras over a graded presentation.

mod algebra;
mod serialize;
mod word;

pub use algebra::{BidegreeBasis, DgAlgebra, DgElement, ExtensionKind, Term};
pub use serialize::{parse_dg_element, DgSpecDoc, DgVariableDoc};
pub use word::{DgVariable, VarKind, Word};
