use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{binomial, Field, Scalar};
use crate::linalg::SparseVec;
use crate::poly::{Monomial, Polynomial};
use crate::presentation::{GradedPresentation, RingTables};

use super::word::{DgVariable, VarKind, Word};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// Whether even variables are divided-power or polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionKind {
    /// Semifree Γ-extension (acyclic closures).
    Closure,
    /// Semifree extension with polynomial even variables (minimal models).
    Model,
}

impl ExtensionKind {
    pub fn even_kind(&self) -> VarKind {
        match self {
            ExtensionKind::Closure => VarKind::Divided,
            ExtensionKind::Model => VarKind::Polynomial,
        }
    }
}

/// A basis monomial `m * w`: normal base monomial times a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub word: Word,
    pub mono: Monomial,
}

/// A finite linear combination of terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgElement {
    owner: u64,
    terms: BTreeMap<Term, Scalar>,
}

impl DgElement {
    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, t: Term, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&t);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn add(&self, other: &DgElement) -> DgElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.push(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> DgElement {
        let mut out = DgElement { owner: self.owner, terms: BTreeMap::new() };
        for (t, a) in &self.terms {
            out.push(t.clone(), a * c);
        }
        out
    }

    pub fn sub(&self, other: &DgElement) -> DgElement {
        let neg = match other.terms.values().next() {
            Some(c) => -&c.field().one(),
            None => return self.clone(),
        };
        self.add(&other.scale(&neg))
    }

    /// Coefficient of the term `1 * w`.
    pub fn coefficient(&self, word: &Word, mono: &Monomial) -> Option<&Scalar> {
        self.terms.get(&Term { word: word.clone(), mono: mono.clone() })
    }
}

/// A semifree extension `B<X>` of a graded presentation `B`: ordered
/// variables with their differentials.
pub struct DgAlgebra {
    id: u64,
    base: Arc<GradedPresentation>,
    tables: Arc<RingTables>,
    kind: ExtensionKind,
    variables: Vec<DgVariable>,
    differentials: Vec<DgElement>,
    target_kernel: Vec<Polynomial>,
    word_cache: RwLock<HashMap<Word, DgElement>>,
}

impl Clone for DgAlgebra {
    fn clone(&self) -> Self {
        DgAlgebra {
            id: self.id,
            base: self.base.clone(),
            tables: self.tables.clone(),
            kind: self.kind,
            variables: self.variables.clone(),
            differentials: self.differentials.clone(),
            target_kernel: self.target_kernel.clone(),
            word_cache: RwLock::new(self.word_cache.read().expect("cache").clone()),
        }
    }
}

impl std::fmt::Debug for DgAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DgAlgebra")
            .field("kind", &self.kind)
            .field("base_vars", &self.base.vars())
            .field("variables", &self.variables.len())
            .finish()
    }
}

impl DgAlgebra {
    /// The base itself, with no adjoined variables, valid up to internal degree `max_ideg`.
    pub fn new(base: Arc<GradedPresentation>, kind: ExtensionKind, max_ideg: u32) -> Result<Self, Error> {
        let tables = Arc::new(RingTables::new(&base, max_ideg)?);
        Ok(Self::with_tables(base, tables, kind))
    }

    pub fn with_tables(base: Arc<GradedPresentation>, tables: Arc<RingTables>, kind: ExtensionKind) -> Self {
        DgAlgebra {
            id: fresh_id(),
            base,
            tables,
            kind,
            variables: Vec::new(),
            differentials: Vec::new(),
            target_kernel: Vec::new(),
            word_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &Arc<GradedPresentation> {
        &self.base
    }

    pub fn tables(&self) -> &Arc<RingTables> {
        &self.tables
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    pub fn max_ideg(&self) -> u32 {
        self.tables.max_degree()
    }

    pub fn variables(&self) -> &[DgVariable] {
        &self.variables
    }

    pub fn differential_of(&self, var: usize) -> &DgElement {
        &self.differentials[var]
    }

    /// Generators of the ideal this extension resolves (empty if not recorded).
    pub fn target_kernel(&self) -> &[Polynomial] {
        &self.target_kernel
    }

    pub fn set_target_kernel(&mut self, kernel: Vec<Polynomial>) {
        self.target_kernel = kernel;
    }

    pub fn zero(&self) -> DgElement {
        DgElement { owner: self.id, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> DgElement {
        self.term(Word::empty(), Monomial::one(self.base.nvars()), self.field().one())
    }

    pub fn term(&self, word: Word, mono: Monomial, c: Scalar) -> DgElement {
        let mut e = self.zero();
        e.push(Term { word, mono }, c);
        e
    }

    pub fn variable(&self, var: usize) -> DgElement {
        self.term(Word::single(var, 1), Monomial::one(self.base.nvars()), self.field().one())
    }

    /// Embeds a base polynomial (reduced to normal form).
    pub fn from_base(&self, f: &Polynomial) -> Result<DgElement, Error> {
        let r = self.base.reduce(f)?;
        let mut e = self.zero();
        for (m, c) in r.terms() {
            e.push(Term { word: Word::empty(), mono: m.clone() }, c.clone());
        }
        Ok(e)
    }

    pub fn owns(&self, e: &DgElement) -> bool {
        e.owner == self.id
    }

    pub(crate) fn adopt(&self, mut e: DgElement) -> DgElement {
        e.owner = self.id;
        e
    }

    pub fn variables_in_bidegree(&self, hdeg: u32, ideg: u32) -> Vec<usize> {
        self.variables.iter().filter(|v| v.hdeg == hdeg && v.ideg == ideg).map(|v| v.index).collect()
    }

    /// Homological and internal degree, if the element is bihomogeneous and nonzero.
    pub fn bidegree(&self, e: &DgElement) -> Option<(u32, u32)> {
        let mut out = None;
        for t in e.terms.keys() {
            let b = (t.word.hdeg(&self.variables), t.word.ideg(&self.variables) + t.mono.degree());
            match out {
                None => out = Some(b),
                Some(o) if o != b => return None,
                _ => {}
            }
        }
        out
    }

    /// Adjoins a variable after the existing ones.
    pub fn add_variable(
        &mut self,
        name: String,
        hdeg: u32,
        ideg: u32,
        kind: VarKind,
        differential: DgElement,
    ) -> Result<usize, Error> {
        if hdeg == 0 || ideg == 0 {
            return Err(Error::InvalidSpec(format!("{name}: degrees must be positive")));
        }
        if kind.is_odd() != (hdeg % 2 == 1) {
            return Err(Error::InvalidSpec(format!("{name}: kind {kind:?} does not match degree {hdeg}")));
        }
        if kind != VarKind::Exterior && kind != self.kind.even_kind() {
            return Err(Error::InvalidSpec(format!("{name}: {kind:?} variables do not belong in a {:?}", self.kind)));
        }
        if self.variables.last().is_some_and(|v| v.hdeg > hdeg) {
            return Err(Error::InvalidSpec(format!("{name}: variables must be added in nondecreasing degree")));
        }
        if self.variables.iter().any(|v| v.name == name) || self.base.vars().contains(&name) {
            return Err(Error::BadVariableName(name));
        }
        if !differential.is_zero() {
            if !self.owns(&differential) {
                return Err(Error::SpecMismatch);
            }
            if self.bidegree(&differential) != Some((hdeg - 1, ideg)) {
                return Err(Error::InvalidSpec(format!(
                    "{name}: differential has bidegree {:?}, expected ({}, {ideg})",
                    self.bidegree(&differential),
                    hdeg - 1
                )));
            }
        }
        let index = self.variables.len();
        self.variables.push(DgVariable { name, hdeg, ideg, kind, index });
        self.differentials.push(differential);
        Ok(index)
    }

    /// Product of two words: `None` when it vanishes, else the coefficient and the sorted word.
    fn word_product(&self, a: &Word, b: &Word) -> Option<(Scalar, Word)> {
        let field = self.field();
        let mut coef = field.one();
        let mut out: smallvec::SmallVec<[(u32, u32); 4]> = smallvec::SmallVec::new();
        let odd = |v: u32| self.variables[v as usize].kind.is_odd();
        let mut odd_left_in_a = a.0.iter().filter(|f| odd(f.0)).count();
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            let ord = match (a.0.get(i), b.0.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    if odd(a.0[i].0) {
                        odd_left_in_a -= 1;
                    }
                    out.push(a.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if odd(b.0[j].0) {
                        swaps += odd_left_in_a;
                    }
                    out.push(b.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (v, ea) = a.0[i];
                    let eb = b.0[j].1;
                    match self.variables[v as usize].kind {
                        VarKind::Exterior => return None,
                        VarKind::Divided => {
                            coef = &coef * &binomial(field, ea + eb, ea);
                            if coef.is_zero() {
                                return None;
                            }
                        }
                        VarKind::Polynomial => {}
                    }
                    out.push((v, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        if swaps % 2 == 1 {
            coef = -&coef;
        }
        Some((coef, Word(out)))
    }

    /// Bilinear product with Koszul signs and divided-power rules; base
    /// coefficients are reduced to normal form.
    pub fn multiply(&self, a: &DgElement, b: &DgElement) -> Result<DgElement, Error> {
        if !(self.owns(a) || a.is_zero()) || !(self.owns(b) || b.is_zero()) {
            return Err(Error::SpecMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub(crate) fn mul(&self, a: &DgElement, b: &DgElement) -> DgElement {
        let mut out = self.zero();
        for (ta, ca) in &a.terms {
            for (tb, cb) in &b.terms {
                let Some((sign, word)) = self.word_product(&ta.word, &tb.word) else { continue };
                let c = &(ca * cb) * &sign;
                if tb.mono.is_one() {
                    out.push(Term { word, mono: ta.mono.clone() }, c);
                    continue;
                }
                for (m, k) in self.mono_product(&ta.mono, &tb.mono) {
                    out.push(Term { word: word.clone(), mono: m }, &c * &k);
                }
            }
        }
        out
    }

    fn mono_product(&self, a: &Monomial, b: &Monomial) -> Vec<(Monomial, Scalar)> {
        let d = a.degree() + b.degree();
        assert!(
            d <= self.tables.max_degree(),
            "internal degree {d} beyond the table bound {}",
            self.tables.max_degree()
        );
        let k = self.tables.index_of(a).expect("normal base monomial");
        self.tables
            .mul_monomial(a.degree(), k, b)
            .into_iter()
            .map(|(i, c)| (self.tables.basis(d)[i].clone(), c))
            .collect()
    }

    /// Multiplies by a base monomial.
    pub fn mul_base(&self, m: &Monomial, e: &DgElement) -> DgElement {
        let mut out = self.zero();
        for (t, c) in &e.terms {
            for (mm, k) in self.mono_product(&t.mono, m) {
                out.push(Term { word: t.word.clone(), mono: mm }, c * &k);
            }
        }
        out
    }

    /// `d(w)` for a word, by the Leibniz rule on its first factor and
    /// `d(y^(i)) = d(y) y^(i-1)` (resp. `i d(y) y^(i-1)` for polynomial variables).
    pub fn differential_word(&self, w: &Word) -> DgElement {
        if let Some(hit) = self.word_cache.read().expect("cache").get(w) {
            return hit.clone();
        }
        let result = match w.split_first() {
            None => self.zero(),
            Some(((v, e), rest)) => {
                let var = &self.variables[v];
                let dv = &self.differentials[v];
                let lower = Word::single(v, e - 1);
                let one = Monomial::one(self.base.nvars());
                let mut du = self.mul(dv, &self.term(lower, one.clone(), self.field().one()));
                if var.kind == VarKind::Polynomial && e > 1 {
                    du = du.scale(&self.field().from_i64(e as i64));
                }
                let rest_el = self.term(rest.clone(), one.clone(), self.field().one());
                let first = self.mul(&du, &rest_el);
                let drest = self.differential_word(&rest);
                let u = self.term(Word::single(v, e), one, self.field().one());
                let mut second = self.mul(&u, &drest);
                if (var.hdeg * e) % 2 == 1 {
                    second = second.scale(&-&self.field().one());
                }
                first.add(&second)
            }
        };
        self.word_cache.write().expect("cache").insert(w.clone(), result.clone());
        result
    }

    /// The differential extended as a derivation (base elements are cycles).
    pub fn differential(&self, a: &DgElement) -> DgElement {
        let mut out = self.zero();
        for (t, c) in &a.terms {
            let dw = self.differential_word(&t.word);
            let part = if t.mono.is_one() { dw } else { self.mul_base(&t.mono, &dw) };
            out = out.add(&part.scale(c));
        }
        out
    }

    /// Checks `d(d(v)) = 0` for every variable; returns the first offender.
    pub fn check_square_zero(&self) -> Result<(), Error> {
        for (i, dv) in self.differentials.iter().enumerate() {
            if !self.differential(dv).is_zero() {
                return Err(Error::InvalidSpec(format!("d(d({})) != 0", self.variables[i].name)));
            }
        }
        Ok(())
    }

    /// All words of homological degree `n` and internal degree at most `max_ideg`, sorted.
    pub fn words(&self, n: u32, max_ideg: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let candidates: Vec<&DgVariable> =
            self.variables.iter().filter(|v| v.hdeg <= n && v.ideg <= max_ideg).collect();
        let mut cur = smallvec::SmallVec::new();
        enumerate_words(&candidates, 0, n, max_ideg, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Ordered basis of the bidegree `(n, j)` component.
    pub fn basis_of_bidegree(&self, n: u32, j: u32) -> BidegreeBasis {
        let mut elements = Vec::new();
        for w in self.words(n, j) {
            let d = j - w.ideg(&self.variables);
            for k in 0..self.tables.dim(d) {
                elements.push((w.clone(), k));
            }
        }
        BidegreeBasis::new(n, j, elements)
    }

    /// Coordinates of a bihomogeneous element of bidegree `(basis.hdeg, basis.ideg)`.
    pub fn coordinates(&self, e: &DgElement, basis: &BidegreeBasis) -> SparseVec {
        let mut v: Vec<(usize, Scalar)> = e
            .terms
            .iter()
            .map(|(t, c)| {
                let k = self.tables.index_of(&t.mono).expect("normal monomial");
                let i = *basis
                    .index
                    .get(&(t.word.clone(), k))
                    .unwrap_or_else(|| panic!("term {:?} outside bidegree ({}, {})", t, basis.hdeg, basis.ideg));
                (i, c.clone())
            })
            .collect();
        v.sort_by_key(|x| x.0);
        v
    }

    pub fn element(&self, basis: &BidegreeBasis, v: &SparseVec) -> DgElement {
        let mut e = self.zero();
        for (i, c) in v {
            let (w, k) = &basis.elements[*i];
            let d = basis.ideg - w.ideg(&self.variables);
            e.push(Term { word: w.clone(), mono: self.tables.basis(d)[*k].clone() }, c.clone());
        }
        e
    }

    /// Columns of the differential `(n, j) -> (n-1, j)` in the given bases.
    pub fn differential_matrix(&self, source: &BidegreeBasis, target: &BidegreeBasis) -> Vec<SparseVec> {
        source
            .elements
            .iter()
            .map(|(w, k)| {
                let d = source.ideg - w.ideg(&self.variables);
                let m = &self.tables.basis(d)[*k];
                let dw = self.differential_word(w);
                let img = if m.is_one() { dw } else { self.mul_base(m, &dw) };
                self.coordinates(&img, target)
            })
            .collect()
    }

    /// The same variables over `k`: base coefficients of positive degree are dropped.
    pub fn base_change_to_k(&self) -> Result<DgAlgebra, Error> {
        let k = Arc::new(GradedPresentation::polynomial_ring(self.field(), Vec::new())?);
        let mut out = DgAlgebra::new(k, self.kind, self.max_ideg())?;
        let unit = Monomial::one(0);
        for (v, dv) in self.variables.iter().zip(&self.differentials) {
            let mut e = out.zero();
            for (t, c) in &dv.terms {
                if t.mono.is_one() {
                    e.push(Term { word: t.word.clone(), mono: unit.clone() }, c.clone());
                }
            }
            out.variables.push(v.clone());
            out.differentials.push(e);
        }
        Ok(out)
    }

    /// An algebra with the given variables; differentials are set afterwards.
    pub(crate) fn from_parts(
        base: Arc<GradedPresentation>,
        tables: Arc<RingTables>,
        kind: ExtensionKind,
        variables: Vec<DgVariable>,
    ) -> DgAlgebra {
        let mut out = DgAlgebra::with_tables(base, tables, kind);
        out.variables = variables;
        out
    }

    pub(crate) fn set_differentials(&mut self, differentials: Vec<DgElement>) {
        assert_eq!(differentials.len(), self.variables.len());
        self.differentials = differentials.into_iter().map(|d| self.adopt(d)).collect();
        self.word_cache.write().expect("cache").clear();
    }

    pub(crate) fn relabel(&self, e: &DgElement, map: &[usize], owner: &DgAlgebra) -> DgElement {
        let mut out = owner.zero();
        for (t, c) in &e.terms {
            out.push(Term { word: t.word.remap(map), mono: t.mono.clone() }, c.clone());
        }
        out
    }

    /// Renders an element in the input syntax, with `g(v,i)` for divided powers.
    pub fn render(&self, e: &DgElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (t, c)) in e.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            out.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mut parts = Vec::new();
            if !t.mono.is_one() {
                parts.push(t.mono.render(self.base.vars()));
            }
            if !t.word.is_empty() {
                parts.push(t.word.render(&self.variables));
            }
            let body = parts.join("*");
            out.push_str(&crate::poly::render_term(&abs, &body, body.is_empty()));
        }
        out
    }
}

fn enumerate_words(
    vars: &[&DgVariable],
    start: usize,
    hdeg_left: u32,
    ideg_left: u32,
    cur: &mut smallvec::SmallVec<[(u32, u32); 4]>,
    out: &mut Vec<Word>,
) {
    if hdeg_left == 0 {
        out.push(Word(cur.clone()));
        return;
    }
    for (pos, v) in vars.iter().enumerate().skip(start) {
        if v.hdeg > hdeg_left || v.ideg > ideg_left {
            continue;
        }
        let max_e = if v.kind.is_odd() { 1 } else { (hdeg_left / v.hdeg).min(ideg_left / v.ideg) };
        for e in 1..=max_e {
            cur.push((v.index as u32, e));
            enumerate_words(vars, pos + 1, hdeg_left - v.hdeg * e, ideg_left - v.ideg * e, cur, out);
            cur.pop();
        }
    }
}

/// Canonically ordered basis `(word, base monomial index)` of one bidegree.
#[derive(Clone, Debug)]
pub struct BidegreeBasis {
    pub hdeg: u32,
    pub ideg: u32,
    pub elements: Vec<(Word, usize)>,
    index: HashMap<(Word, usize), usize>,
}

impl BidegreeBasis {
    fn new(hdeg: u32, ideg: u32, elements: Vec<(Word, usize)>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        BidegreeBasis { hdeg, ideg, elements, index }
    }

    pub fn empty(hdeg: u32, ideg: u32) -> Self {
        BidegreeBasis { hdeg, ideg, elements: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, word: &Word, mono_index: usize) -> Option<usize> {
        self.index.get(&(word.clone(), mono_index)).copied()
    }
}
