//! Exact sparse linear algebra: echelon subspaces, kernels, ranks and solves.
//!
//! Over ℚ vectors are scaled to primitive integer rows and eliminated
//! fraction-free (`t <- p*t - a*r`, then divided by the row content), so
//! coefficients never leave ℤ. Over 𝔽ₚ rows are kept monic and eliminated
//! directly.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Builds a sparse vector from unsorted entries, combining duplicates.
pub fn sparse_from_entries(mut entries: Vec<(usize, Scalar)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, c) in entries {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d = &*d + &c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub fn sparse_lin_comb(a: &Scalar, u: &SparseVec, b: &Scalar, v: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < v.len() {
        let take = match (u.get(i), v.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (idx, c) = match take {
            std::cmp::Ordering::Less => {
                i += 1;
                (u[i - 1].0, a * &u[i - 1].1)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (v[j - 1].0, b * &v[j - 1].1)
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (u[i - 1].0, &(a * &u[i - 1].1) + &(b * &v[j - 1].1))
            }
        };
        if !c.is_zero() {
            out.push((idx, c));
        }
    }
    out
}

trait Domain: Clone + Send + Sync {
    type C: Clone + Send + Sync + PartialEq + Debug;
    fn is_zero(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    fn normalize(&self, row: &mut Row<Self::C>);
    /// `(row, scale)` with `row = scale * v` in the domain.
    fn import(&self, v: &SparseVec) -> (Vec<(usize, Self::C)>, Self::C);
    fn export(&self, c: &Self::C) -> Scalar;
}

#[derive(Clone, Debug)]
struct Row<C> {
    vec: Vec<(usize, C)>,
    combo: Vec<(usize, C)>,
}

fn combine<D: Domain>(d: &D, s: &D::C, u: &[(usize, D::C)], t: &D::C, v: &[(usize, D::C)]) -> Vec<(usize, D::C)> {
    // s*u - t*v
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < v.len() {
        let ord = match (u.get(i), v.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (idx, c) = match ord {
            std::cmp::Ordering::Less => {
                i += 1;
                (u[i - 1].0, d.mul(s, &u[i - 1].1))
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (v[j - 1].0, d.neg(&d.mul(t, &v[j - 1].1)))
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (u[i - 1].0, d.sub(&d.mul(s, &u[i - 1].1), &d.mul(t, &v[j - 1].1)))
            }
        };
        if !d.is_zero(&c) {
            out.push((idx, c));
        }
    }
    out
}

#[derive(Clone)]
struct IntDomain;

impl Domain for IntDomain {
    type C = BigInt;

    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn normalize(&self, row: &mut Row<BigInt>) {
        let mut g = BigInt::zero();
        for (_, c) in row.vec.iter().chain(row.combo.iter()) {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        let lead_neg = row.vec.first().or(row.combo.first()).is_some_and(|(_, c)| c.is_negative());
        if lead_neg {
            g = -g;
        }
        if !g.is_zero() && !g.is_one() {
            for (_, c) in row.vec.iter_mut().chain(row.combo.iter_mut()) {
                *c = &*c / &g;
            }
        }
    }

    fn import(&self, v: &SparseVec) -> (Vec<(usize, BigInt)>, BigInt) {
        let mut l = BigInt::one();
        for (_, c) in v {
            let q = c.as_rational().expect("rational scalar");
            l = l.lcm(q.denom());
        }
        let row = v
            .iter()
            .map(|(i, c)| {
                let q = c.as_rational().unwrap();
                (*i, q.numer() * (&l / q.denom()))
            })
            .collect();
        (row, l)
    }

    fn export(&self, c: &BigInt) -> Scalar {
        Field::Rational.from_bigint(c)
    }
}

#[derive(Clone)]
struct ModDomain(u32);

impl Domain for ModDomain {
    type C = u32;

    fn is_zero(&self, c: &u32) -> bool {
        *c == 0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 as u64 - *b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        self.sub(&0, a)
    }

    fn normalize(&self, row: &mut Row<u32>) {
        let lead = row.vec.first().or(row.combo.first()).map(|(_, c)| *c);
        if let Some(lead) = lead {
            if lead != 1 {
                let inv = Scalar::Mod(lead, self.0).inverse().expect("nonzero");
                let Scalar::Mod(inv, _) = inv else { unreachable!() };
                for (_, c) in row.vec.iter_mut().chain(row.combo.iter_mut()) {
                    *c = self.mul(c, &inv);
                }
            }
        }
    }

    fn import(&self, v: &SparseVec) -> (Vec<(usize, u32)>, u32) {
        let row = v
            .iter()
            .map(|(i, c)| match c {
                Scalar::Mod(x, _) => (*i, *x),
                Scalar::Rat(_) => panic!("rational scalar in prime field elimination"),
            })
            .collect();
        (row, 1)
    }

    fn export(&self, c: &u32) -> Scalar {
        Scalar::Mod(*c, self.0)
    }
}

#[derive(Clone)]
struct Echelon<D: Domain> {
    dom: D,
    rows: Vec<Row<D::C>>,
    pivots: HashMap<usize, usize>,
}

impl<D: Domain> Echelon<D> {
    fn new(dom: D) -> Self {
        Echelon { dom, rows: Vec::new(), pivots: HashMap::new() }
    }

    /// Eliminates leading entries until the leading column is free (or the row vanishes).
    fn reduce(&self, mut t: Row<D::C>) -> Row<D::C> {
        while let Some((col, a)) = t.vec.first().cloned() {
            let Some(&r) = self.pivots.get(&col) else { break };
            let row = &self.rows[r];
            let p = row.vec[0].1.clone();
            t.vec = combine(&self.dom, &p, &t.vec, &a, &row.vec);
            if !row.combo.is_empty() || !t.combo.is_empty() {
                t.combo = combine(&self.dom, &p, &t.combo, &a, &row.combo);
            }
            self.dom.normalize(&mut t);
        }
        t
    }

    /// Adds the reduced row; returns it when it was independent.
    fn insert(&mut self, t: Row<D::C>) -> Result<usize, Row<D::C>> {
        let mut t = self.reduce(t);
        if t.vec.is_empty() {
            return Err(t);
        }
        self.dom.normalize(&mut t);
        let col = t.vec[0].0;
        self.pivots.insert(col, self.rows.len());
        self.rows.push(t);
        Ok(self.rows.len() - 1)
    }
}

#[derive(Clone)]
enum Inner {
    Int(Echelon<IntDomain>),
    Mod(Echelon<ModDomain>),
}

/// A subspace of `k^N` held in semi-echelon form (distinct pivot columns).
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    inner: Inner,
}

macro_rules! with_inner {
    ($self:expr, $e:ident => $body:expr) => {
        match &$self.inner {
            Inner::Int($e) => $body,
            Inner::Mod($e) => $body,
        }
    };
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subspace").field("field", &self.field).field("dim", &self.dim()).finish()
    }
}

impl Subspace {
    pub fn new(field: Field) -> Self {
        let inner = match field {
            Field::Rational => Inner::Int(Echelon::new(IntDomain)),
            Field::Prime(p) => Inner::Mod(Echelon::new(ModDomain(p))),
        };
        Subspace { field, inner }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        with_inner!(self, e => e.rows.len())
    }

    /// Inserts `v`; returns its reduced form (a nonzero multiple of `v` minus
    /// an element of the old subspace) when it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        match &mut self.inner {
            Inner::Int(e) => insert_plain(e, v),
            Inner::Mod(e) => insert_plain(e, v),
        }
    }

    /// Residual of `v` after semi-reduction (zero iff `v` lies in the subspace).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        with_inner!(self, e => {
            let (vec, _) = e.dom.import(v);
            let r = e.reduce(Row { vec, combo: Vec::new() });
            r.vec.iter().map(|(i, c)| (*i, e.dom.export(c))).collect()
        })
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Pivot columns of the current basis, in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        with_inner!(self, e => e.rows.iter().map(|r| r.vec[0].0).collect())
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        with_inner!(self, e => e
            .rows
            .iter()
            .map(|r| r.vec.iter().map(|(i, c)| (*i, e.dom.export(c))).collect())
            .collect())
    }
}

fn insert_plain<D: Domain>(e: &mut Echelon<D>, v: &SparseVec) -> Option<SparseVec> {
    let (vec, _) = e.dom.import(v);
    match e.insert(Row { vec, combo: Vec::new() }) {
        Ok(r) => Some(e.rows[r].vec.iter().map(|(i, c)| (*i, e.dom.export(c))).collect()),
        Err(_) => None,
    }
}

fn kernel_generic<D: Domain>(dom: D, columns: &[SparseVec]) -> (usize, Vec<SparseVec>) {
    let mut e = Echelon::new(dom);
    let mut kernel = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let (vec, l) = e.dom.import(col);
        let mut row = Row { vec, combo: vec![(i, l)] };
        e.dom.normalize(&mut row);
        if let Err(z) = e.insert(row) {
            let mut z = z;
            e.dom.normalize(&mut z);
            kernel.push(z.combo.iter().map(|(j, c)| (*j, e.dom.export(c))).collect());
        }
    }
    (e.rows.len(), kernel)
}

/// Rank of the matrix with the given columns, and a basis of its kernel
/// (vectors indexed by column).
pub fn rank_and_kernel(field: Field, columns: &[SparseVec]) -> (usize, Vec<SparseVec>) {
    match field {
        Field::Rational => kernel_generic(IntDomain, columns),
        Field::Prime(p) => kernel_generic(ModDomain(p), columns),
    }
}

pub fn rank(field: Field, columns: &[SparseVec]) -> usize {
    let mut s = Subspace::new(field);
    for c in columns {
        s.insert(c);
    }
    s.dim()
}

fn solve_generic<D: Domain>(dom: D, field: Field, columns: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    const TARGET: usize = usize::MAX;
    let mut e = Echelon::new(dom);
    for (i, col) in columns.iter().enumerate() {
        let (vec, l) = e.dom.import(col);
        let mut row = Row { vec, combo: vec![(i, l)] };
        e.dom.normalize(&mut row);
        let _ = e.insert(row);
    }
    let (vec, l) = e.dom.import(target);
    let t = e.reduce(Row { vec, combo: vec![(TARGET, l)] });
    if !t.vec.is_empty() {
        return None;
    }
    let (last, ct) = t.combo.last().expect("target coefficient survives");
    debug_assert_eq!(*last, TARGET);
    let ct = e.dom.export(ct);
    let scale = -&ct.inverse().expect("nonzero");
    let sol = t.combo[..t.combo.len() - 1].iter().map(|(j, c)| (*j, &e.dom.export(c) * &scale)).collect();
    let _ = field;
    Some(sol)
}

/// Some `x` with `sum_i x_i * columns[i] = target`, found by elimination in
/// column order (free columns set to zero), or `None` if inconsistent.
pub fn solve(field: Field, columns: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    if target.is_empty() {
        return Some(Vec::new());
    }
    match field {
        Field::Rational => solve_generic(IntDomain, field, columns, target),
        Field::Prime(p) => solve_generic(ModDomain(p), field, columns, target),
    }
}

/// Applies the matrix with the given columns to `x`.
pub fn apply(columns: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut entries = Vec::new();
    for (j, c) in x {
        for (i, a) in &columns[*j] {
            entries.push((*i, a * c));
        }
    }
    sparse_from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[(usize, i64)]) -> SparseVec {
        v.iter().map(|(i, c)| (*i, Field::Rational.from_i64(*c))).collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        // columns (1,1), (1,1), (0,1): kernel spanned by e0 - e1
        let cols = vec![q(&[(0, 1), (1, 1)]), q(&[(0, 1), (1, 1)]), q(&[(1, 1)])];
        let (r, k) = rank_and_kernel(Field::Rational, &cols);
        assert_eq!(r, 2);
        assert_eq!(k.len(), 1);
        assert!(apply(&cols, &k[0]).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![q(&[(0, 2)]), q(&[(0, 1), (1, 3)])];
        let x = solve(Field::Rational, &cols, &q(&[(0, 1), (1, 6)])).unwrap();
        assert_eq!(apply(&cols, &x), q(&[(0, 1), (1, 6)]));
        let cols = vec![q(&[(0, 1)])];
        assert!(solve(Field::Rational, &cols, &q(&[(1, 1)])).is_none());
    }

    #[test]
    fn prime_field_rank_differs() {
        // det [[1,1],[1,4]] = 3: singular over F_3 only.
        let cols = vec![
            vec![(0, Scalar::Mod(1, 3)), (1, Scalar::Mod(1, 3))],
            vec![(0, Scalar::Mod(1, 3)), (1, Scalar::Mod(1, 3))],
        ];
        assert_eq!(rank(Field::Prime(3), &cols), 1);
        assert_eq!(rank(Field::Rational, &[q(&[(0, 1), (1, 1)]), q(&[(0, 1), (1, 4)])]), 2);
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel_vectors(entries in proptest::collection::vec((0usize..6, 0usize..5, -3i64..4), 0..25)) {
            let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); 5];
            for (row, col, c) in entries {
                cols[col].push((row, Field::Rational.from_i64(c)));
            }
            let cols: Vec<SparseVec> = cols.into_iter().map(sparse_from_entries).collect();
            let (r, k) = rank_and_kernel(Field::Rational, &cols);
            prop_assert_eq!(r + k.len(), cols.len());
            for z in &k {
                prop_assert!(apply(&cols, z).is_empty());
            }
            prop_assert_eq!(rank(Field::Prime(101), &cols.iter().map(|c| c.iter().map(|(i, s)| {
                let n = s.as_rational().unwrap().numer().clone();
                (*i, Field::Prime(101).from_bigint(&n))
            }).filter(|(_, s)| !s.is_zero()).collect()).collect::<Vec<_>>()) <= r, true);
        }
    }
}
