use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// How a variable behaves under multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    /// Odd homological degree, squares to zero.
    Exterior,
    /// Even homological degree, ordinary powers.
    Polynomial,
    /// Even homological degree, divided powers `y^(i)`.
    Divided,
}

impl VarKind {
    pub fn is_odd(&self) -> bool {
        matches!(self, VarKind::Exterior)
    }
}

/// An adjoined variable of bidegree `(hdeg, ideg)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DgVariable {
    pub name: String,
    pub hdeg: u32,
    pub ideg: u32,
    pub kind: VarKind,
    /// Position in creation order; words are sorted by it.
    pub index: usize,
}

/// A monomial in the adjoined variables: `(variable index, exponent)` pairs with
/// strictly increasing indices. For divided variables the exponent `i` stands
/// for `y^(i)`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub(crate) SmallVec<[(u32, u32); 4]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn single(var: usize, exp: u32) -> Word {
        let mut v = SmallVec::new();
        if exp > 0 {
            v.push((var as u32, exp));
        }
        Word(v)
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of exponents.
    pub fn length(&self) -> u32 {
        self.0.iter().map(|f| f.1).sum()
    }

    /// A single variable to the first power.
    pub fn as_variable(&self) -> Option<usize> {
        match self.0.as_slice() {
            [(v, 1)] => Some(*v as usize),
            _ => None,
        }
    }

    pub fn hdeg(&self, vars: &[DgVariable]) -> u32 {
        self.0.iter().map(|&(v, e)| vars[v as usize].hdeg * e).sum()
    }

    pub fn ideg(&self, vars: &[DgVariable]) -> u32 {
        self.0.iter().map(|&(v, e)| vars[v as usize].ideg * e).sum()
    }

    pub(crate) fn split_first(&self) -> Option<((usize, u32), Word)> {
        let (&(v, e), rest) = self.0.split_first()?;
        Some(((v as usize, e), Word(rest.iter().cloned().collect())))
    }

    pub(crate) fn remap(&self, map: &[usize]) -> Word {
        let mut v: SmallVec<[(u32, u32); 4]> = self.0.iter().map(|&(i, e)| (map[i as usize] as u32, e)).collect();
        v.sort_by_key(|f| f.0);
        Word(v)
    }

    pub fn render(&self, vars: &[DgVariable]) -> String {
        self.0
            .iter()
            .map(|&(v, e)| {
                let var = &vars[v as usize];
                match (var.kind, e) {
                    (_, 1) => var.name.clone(),
                    (VarKind::Divided, _) => format!("g({},{})", var.name, e),
                    _ => format!("{}^{}", var.name, e),
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
