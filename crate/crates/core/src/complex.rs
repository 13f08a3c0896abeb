//! Multigraded free complexes with labeled bases, chain maps, cones and
//! strand-wise homology over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::poly::{Coeff, Monomial, MonomialIdeal, Polynomial, VarSet};

/// Upper bound on the number of variables for strand enumeration.
pub const MAX_STRAND_VARS: usize = 22;

/// A set of generator positions, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> Self {
        Subset(ix.into_iter().fold(0, |m, i| {
            assert!(i < 64, "subset index {i} out of range");
            m | 1 << i
        }))
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, o: Subset) -> Self {
        Subset(self.0 | o.0)
    }

    pub fn intersects(self, o: Subset) -> bool {
        self.0 & o.0 != 0
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// Pairs `(v, w)` with `v` in `self`, `w` in `o` and `v > w`.
    pub fn inversions(self, o: Subset) -> usize {
        self.iter().map(|v| o.count_below(v)).sum()
    }
}

/// Ordered by size, then lexicographically on the increasing index list.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<usize>> for Subset {
    fn from(v: Vec<usize>) -> Self {
        Subset::from_indices(v)
    }
}

impl From<Subset> for Vec<usize> {
    fn from(s: Subset) -> Self {
        s.indices()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConePart {
    Target,
    Source,
}

/// Components of the diameter-four cone: the first resolution, the
/// desuspended second one, and its z-twisted shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TreePart {
    F,
    G,
    Shift,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Subset(Subset),
    Cone(ConePart, Box<Tag>),
    Tensor(Box<Tag>, Box<Tag>),
    Tree(TreePart, Subset),
    Named(String),
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Subset(s) => write!(f, "e{s}"),
            Tag::Cone(ConePart::Target, t) => write!(f, "T:{t}"),
            Tag::Cone(ConePart::Source, t) => write!(f, "S:{t}"),
            Tag::Tensor(a, b) => write!(f, "({a}|{b})"),
            Tag::Tree(TreePart::F, s) => write!(f, "f{s}"),
            Tag::Tree(TreePart::G, s) => write!(f, "g{s}"),
            Tag::Tree(TreePart::Shift, s) => write!(f, "g'{s}"),
            Tag::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub tag: Tag,
    pub multidegree: Monomial,
}

/// Column-sparse matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<BTreeMap<usize, Polynomial>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![BTreeMap::new(); ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Polynomial> {
        self.cols[c].get(&r)
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, Polynomial> {
        &self.cols[c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        assert!(r < self.nrows, "row {r} out of range");
        if p.is_zero() {
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r, p);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &Polynomial) {
        let mut e = self.cols[c].remove(&r).unwrap_or_default();
        e.add_assign(p);
        self.set(r, c, e);
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, p)| (r, c, p)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    pub fn neg(&self) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|(&r, p)| (r, p.neg())).collect())
                .collect(),
        }
    }

    /// `self * rhs`
    pub fn compose(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "matrix shapes do not compose");
        let mut out = SparseMatrix::zeros(self.nrows, rhs.ncols());
        for (c, col) in rhs.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (&k, q) in col {
                for (&r, p) in &self.cols[k] {
                    acc.entry(r).or_default().add_assign(&p.mul(q));
                }
            }
            acc.retain(|_, p| !p.is_zero());
            out.cols[c] = acc;
        }
        out
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut rmap = vec![None; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            rmap[r] = Some(i);
        }
        SparseMatrix {
            nrows: rows.len(),
            cols: cols
                .iter()
                .map(|&c| {
                    self.cols[c]
                        .iter()
                        .filter_map(|(&r, p)| rmap[r].map(|i| (i, p.clone())))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(&r, p)| (r, f(p)))
                        .filter(|(_, p)| !p.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Rows of strings, one cell per entry, for fixtures and table output.
    pub fn to_strings(&self, vars: &VarSet) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|r| {
                (0..self.ncols())
                    .map(|c| match self.get(r, c) {
                        Some(p) => p.display(vars).to_string(),
                        None => "0".to_string(),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn render(&self, vars: &VarSet) -> String {
        let cells = self.to_strings(vars);
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| {
                let r: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                format!("[ {} ]", r.join("  "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// A free complex `F_0 <- F_1 <- ...` whose bases carry tags and multidegrees.
/// `diffs[k]` is the differential out of homological degree `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFreeComplex {
    vars: VarSet,
    modules: Vec<Vec<Label>>,
    diffs: Vec<SparseMatrix>,
}

impl LabeledFreeComplex {
    /// Checks shapes only; use [`verify_complex`] for homogeneity and d² = 0.
    /// Trailing zero modules are dropped.
    pub fn new(vars: VarSet, mut modules: Vec<Vec<Label>>, mut diffs: Vec<SparseMatrix>) -> Result<Self> {
        while modules.last().is_some_and(Vec::is_empty) {
            modules.pop();
        }
        diffs.truncate(modules.len().saturating_sub(1));
        if diffs.len() + 1 != modules.len().max(1) {
            return Err(Error::invalid("need one differential per positive degree"));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.nrows() != modules[k].len() || d.ncols() != modules[k + 1].len() {
                return Err(Error::invalid(format!(
                    "differential {} has shape {}x{}, expected {}x{}",
                    k + 1,
                    d.nrows(),
                    d.ncols(),
                    modules[k].len(),
                    modules[k + 1].len()
                )));
            }
        }
        for l in modules.iter().flatten() {
            if l.multidegree.nvars() != vars.len() {
                return Err(Error::VarMismatch(l.multidegree.nvars(), vars.len()));
            }
        }
        Ok(LabeledFreeComplex { vars, modules, diffs })
    }

    pub fn zero(vars: VarSet) -> Self {
        LabeledFreeComplex { vars, modules: Vec::new(), diffs: Vec::new() }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn modules(&self) -> &[Vec<Label>] {
        &self.modules
    }

    /// Basis of degree `i`; empty outside the support.
    pub fn module(&self, i: usize) -> &[Label] {
        self.modules.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, i: usize) -> usize {
        self.module(i).len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    /// Highest degree with a nonzero module.
    pub fn length(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    /// The differential out of degree `i >= 1`.
    pub fn diff(&self, i: usize) -> Option<&SparseMatrix> {
        if i == 0 {
            None
        } else {
            self.diffs.get(i - 1)
        }
    }

    pub fn diffs(&self) -> &[SparseMatrix] {
        &self.diffs
    }

    pub fn find(&self, tag: &Tag) -> Option<BasisIndex> {
        self.modules.iter().enumerate().find_map(|(d, m)| {
            m.iter()
                .position(|l| &l.tag == tag)
                .map(|index| BasisIndex { degree: d, index })
        })
    }

    pub fn label(&self, b: BasisIndex) -> &Label {
        &self.modules[b.degree][b.index]
    }

    /// All basis elements, degree by degree.
    pub fn basis(&self) -> Vec<BasisIndex> {
        self.modules
            .iter()
            .enumerate()
            .flat_map(|(d, m)| (0..m.len()).map(move |index| BasisIndex { degree: d, index }))
            .collect()
    }

    /// Same complex with new tags.
    pub fn relabel(&self, f: impl Fn(usize, &Label) -> Tag) -> LabeledFreeComplex {
        LabeledFreeComplex {
            vars: self.vars.clone(),
            modules: self
                .modules
                .iter()
                .enumerate()
                .map(|(d, m)| {
                    m.iter()
                        .map(|l| Label { tag: f(d, l), multidegree: l.multidegree.clone() })
                        .collect()
                })
                .collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// Replaces one differential entry. Intended for building fixtures and
    /// deliberately broken complexes.
    pub fn set_entry(&mut self, degree: usize, row: usize, col: usize, p: Polynomial) {
        self.diffs[degree - 1].set(row, col, p);
    }

    /// Applies the differential to a chain.
    pub fn apply_diff(&self, c: &Chain) -> Chain {
        let mut out = Chain::zero(c.degree.saturating_sub(1));
        if c.degree == 0 || c.is_zero() {
            return out;
        }
        let d = &self.diffs[c.degree - 1];
        for (&j, p) in &c.terms {
            for (&r, q) in d.column(j) {
                out.add_poly(r, &p.mul(q));
            }
        }
        out
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            variables: self.vars.names().to_vec(),
            modules: self
                .modules
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|l| LabelDoc {
                            tag: l.tag.clone(),
                            multidegree: l.multidegree.display(&self.vars).to_string(),
                        })
                        .collect()
                })
                .collect(),
            differentials: self
                .diffs
                .iter()
                .map(|d| MatrixDoc {
                    rows: d.nrows(),
                    cols: d.ncols(),
                    entries: d
                        .entries()
                        .map(|(row, col, p)| EntryDoc { row, col, value: p.to_string_terms(&self.vars) })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &ComplexDoc) -> Result<Self> {
        let vars = VarSet::new(doc.variables.clone())?;
        let modules = doc
            .modules
            .iter()
            .map(|m| {
                m.iter()
                    .map(|l| {
                        Ok(Label {
                            tag: l.tag.clone(),
                            multidegree: vars.parse_monomial(&l.multidegree)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let diffs = doc
            .differentials
            .iter()
            .map(|m| {
                let mut s = SparseMatrix::zeros(m.rows, m.cols);
                for e in &m.entries {
                    if e.row >= m.rows || e.col >= m.cols {
                        return Err(Error::invalid("matrix entry out of range"));
                    }
                    s.set(e.row, e.col, Polynomial::from_string_terms(&e.value, &vars)?);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledFreeComplex::new(vars, modules, diffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        LabeledFreeComplex::from_doc(&serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub variables: Vec<String>,
    pub modules: Vec<Vec<LabelDoc>>,
    pub differentials: Vec<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub tag: Tag,
    pub multidegree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryDoc>,
}

/// One matrix entry; `value` lists `(coefficient, monomial)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub row: usize,
    pub col: usize,
    pub value: Vec<(String, String)>,
}

/// Position of a basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub degree: usize,
    pub index: usize,
}

/// A homogeneous-in-homological-degree element: polynomial coefficients on
/// the basis of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain {
    pub degree: usize,
    pub terms: BTreeMap<usize, Polynomial>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn basis(b: BasisIndex, nvars: usize) -> Self {
        Chain::term(b, Polynomial::constant(Coeff::one(), nvars))
    }

    pub fn term(b: BasisIndex, p: Polynomial) -> Self {
        let mut c = Chain::zero(b.degree);
        c.add_poly(b.index, &p);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_poly(&mut self, index: usize, p: &Polynomial) {
        let e = self.terms.entry(index).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    /// `self += p * other`; a zero `other` of any degree is ignored.
    pub fn add_scaled(&mut self, other: &Chain, p: &Polynomial) {
        if other.is_zero() || p.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding chains of different degrees");
        for (&i, q) in &other.terms {
            self.add_poly(i, &q.mul(p));
        }
    }

    pub fn add(&mut self, other: &Chain) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding chains of different degrees");
        for (&i, q) in &other.terms {
            self.add_poly(i, q);
        }
    }

    pub fn neg(&self) -> Chain {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(&i, p)| (i, p.neg())).collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (&i, q) in &self.terms {
            out.add_poly(i, &q.mul(p));
        }
        out
    }

    pub fn scale_coeff(&self, c: &Coeff) -> Chain {
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(&i, p)| (i, p.scale(c)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Multidegree of a homogeneous chain; `Ok(None)` for zero.
    pub fn multidegree(&self, cx: &LabeledFreeComplex) -> Result<Option<Monomial>> {
        let mut deg: Option<Monomial> = None;
        for (&i, p) in &self.terms {
            let base = &cx.modules[self.degree][i].multidegree;
            for (m, _) in p.terms() {
                let d = m * base;
                match &deg {
                    None => deg = Some(d),
                    Some(x) if *x == d => {}
                    Some(_) => return Err(Error::invalid("chain is not multihomogeneous")),
                }
            }
        }
        Ok(deg)
    }

    /// Coordinates at multidegree `b`: for each basis index with label
    /// dividing `b`, the coefficient of `b / deg(label)`.
    pub fn strand_vector(&self, cx: &LabeledFreeComplex, b: &Monomial, index: &[usize]) -> Vec<Coeff> {
        index
            .iter()
            .map(|&i| {
                let Some(p) = self.terms.get(&i) else {
                    return Coeff::zero();
                };
                let base = &cx.modules[self.degree][i].multidegree;
                match b.divide(base) {
                    Ok(m) => p.terms().find(|(t, _)| **t == m).map(|(_, c)| c.clone()).unwrap_or_default(),
                    Err(_) => Coeff::zero(),
                }
            })
            .collect()
    }

    pub fn display(&self, cx: &LabeledFreeComplex) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&i, p)| format!("({})*{}", p.display(&cx.vars), cx.modules[self.degree][i].tag))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A degree-preserving map of complexes; `maps[i]` goes from source degree
/// `i` to target degree `i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: LabeledFreeComplex,
    target: LabeledFreeComplex,
    maps: Vec<SparseMatrix>,
}

impl ChainMap {
    /// Validates shapes and commutation with the differentials.
    pub fn new(source: LabeledFreeComplex, target: LabeledFreeComplex, mut maps: Vec<SparseMatrix>) -> Result<Self> {
        if source.vars != target.vars {
            return Err(Error::VarMismatch(source.vars.len(), target.vars.len()));
        }
        maps.resize_with(source.modules.len(), SparseMatrix::default);
        for (i, m) in maps.iter_mut().enumerate() {
            if m.ncols() == 0 && m.nrows() == 0 {
                *m = SparseMatrix::zeros(target.rank(i), source.rank(i));
            }
            if m.nrows() != target.rank(i) || m.ncols() != source.rank(i) {
                return Err(Error::NotChainMap(format!(
                    "map in degree {i} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        for i in 1..maps.len() {
            let lhs = match target.diff(i) {
                Some(d) => d.compose(&maps[i]),
                None => SparseMatrix::zeros(target.rank(i - 1), source.rank(i)),
            };
            let rhs = maps[i - 1].compose(source.diff(i).expect("source has a differential here"));
            if lhs != rhs {
                let bad = (0..lhs.ncols())
                    .find(|&c| lhs.column(c) != rhs.column(c))
                    .unwrap_or(0);
                return Err(Error::NotChainMap(format!(
                    "square at degree {i} fails on source basis element {}",
                    source.modules[i][bad].tag
                )));
            }
        }
        Ok(ChainMap { source, target, maps })
    }

    pub fn source(&self) -> &LabeledFreeComplex {
        &self.source
    }

    pub fn target(&self) -> &LabeledFreeComplex {
        &self.target
    }

    pub fn map(&self, i: usize) -> Option<&SparseMatrix> {
        self.maps.get(i)
    }
}

/// `Cone(ψ)_i = target_i ⊕ source_{i-1}` with differential
/// `[[∂_target, ψ], [0, -∂_source]]`. Labels are tagged by their part.
pub fn mapping_cone(psi: &ChainMap) -> LabeledFreeComplex {
    let (s, t) = (&psi.source, &psi.target);
    let top = t.modules.len().max(s.modules.len() + 1);
    let mut modules = Vec::with_capacity(top);
    for i in 0..top {
        let mut m: Vec<Label> = t
            .module(i)
            .iter()
            .map(|l| Label { tag: Tag::Cone(ConePart::Target, Box::new(l.tag.clone())), multidegree: l.multidegree.clone() })
            .collect();
        if i > 0 {
            m.extend(s.module(i - 1).iter().map(|l| Label {
                tag: Tag::Cone(ConePart::Source, Box::new(l.tag.clone())),
                multidegree: l.multidegree.clone(),
            }));
        }
        modules.push(m);
    }
    let mut diffs = Vec::new();
    for i in 1..top {
        let (ti, ti1) = (t.rank(i), t.rank(i - 1));
        let mut d = SparseMatrix::zeros(modules[i - 1].len(), modules[i].len());
        if let Some(dt) = t.diff(i) {
            for (r, c, p) in dt.entries() {
                d.set(r, c, p.clone());
            }
        }
        if let Some(m) = psi.maps.get(i - 1) {
            for (r, c, p) in m.entries() {
                d.set(r, ti + c, p.clone());
            }
        }
        if i >= 2 {
            if let Some(ds) = s.diff(i - 1) {
                for (r, c, p) in ds.entries() {
                    d.set(ti1 + r, ti + c, p.neg());
                }
            }
        }
        diffs.push(d);
    }
    LabeledFreeComplex::new(t.vars.clone(), modules, diffs).expect("cone shapes are consistent")
}

/// Drops degree 0 and shifts down by one, negating the differential.
pub fn desuspend_positive(g: &LabeledFreeComplex) -> LabeledFreeComplex {
    let modules = g.modules.iter().skip(1).cloned().collect();
    let diffs = g.diffs.iter().skip(1).map(SparseMatrix::neg).collect();
    LabeledFreeComplex::new(g.vars.clone(), modules, diffs).expect("shift keeps shapes")
}

/// Multiplies every basis multidegree by `m`.
pub fn twist(g: &LabeledFreeComplex, m: &Monomial) -> LabeledFreeComplex {
    let modules = g
        .modules
        .iter()
        .map(|ls| {
            ls.iter()
                .map(|l| Label { tag: l.tag.clone(), multidegree: &l.multidegree * m })
                .collect()
        })
        .collect();
    LabeledFreeComplex::new(g.vars.clone(), modules, g.diffs.clone()).expect("twist keeps shapes")
}

/// `F ⊗ G` with `∂(f⊗g) = ∂f⊗g + (-1)^{|f|} f⊗∂g`; degree `k` lists pairs
/// by increasing `|f|`.
pub fn tensor_product(f: &LabeledFreeComplex, g: &LabeledFreeComplex) -> Result<LabeledFreeComplex> {
    if f.vars != g.vars {
        return Err(Error::VarMismatch(f.vars.len(), g.vars.len()));
    }
    let top = (f.modules.len() + g.modules.len()).saturating_sub(1);
    let mut pos: BTreeMap<(usize, usize, usize, usize), usize> = BTreeMap::new();
    let mut modules: Vec<Vec<Label>> = vec![Vec::new(); top];
    for (k, module) in modules.iter_mut().enumerate() {
        for i in 0..=k {
            for (a, la) in f.module(i).iter().enumerate() {
                for (b, lb) in g.module(k - i).iter().enumerate() {
                    pos.insert((i, a, k - i, b), module.len());
                    module.push(Label {
                        tag: Tag::Tensor(Box::new(la.tag.clone()), Box::new(lb.tag.clone())),
                        multidegree: &la.multidegree * &lb.multidegree,
                    });
                }
            }
        }
    }
    let mut diffs = Vec::new();
    for k in 1..top {
        let mut d = SparseMatrix::zeros(modules[k - 1].len(), modules[k].len());
        for (&(i, a, j, b), &col) in pos.iter().filter(|(key, _)| key.0 + key.2 == k) {
            if let Some(df) = f.diff(i) {
                for (&r, p) in df.column(a) {
                    d.add_to(pos[&(i - 1, r, j, b)], col, p);
                }
            }
            if let Some(dg) = g.diff(j) {
                for (&r, p) in dg.column(b) {
                    let p = if i % 2 == 1 { p.neg() } else { p.clone() };
                    d.add_to(pos[&(i, a, j - 1, r)], col, &p);
                }
            }
        }
        diffs.push(d);
    }
    LabeledFreeComplex::new(f.vars.clone(), modules, diffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFailure {
    pub check: String,
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub passed: bool,
    pub ranks: Vec<usize>,
    pub failures: Vec<ComplexFailure>,
}

/// Checks homogeneity of every entry and `∂∘∂ = 0`.
pub fn verify_complex(cx: &LabeledFreeComplex) -> ComplexReport {
    let mut failures = Vec::new();
    for (k, d) in cx.diffs.iter().enumerate() {
        let i = k + 1;
        for (r, c, p) in d.entries() {
            let want = cx.modules[i][c].multidegree.divide(&cx.modules[i - 1][r].multidegree);
            let ok = match (p.as_term(), &want) {
                (Some((_, m)), Ok(w)) => m == w,
                _ => false,
            };
            if !ok {
                failures.push(ComplexFailure {
                    check: "homogeneity".into(),
                    degree: i,
                    row: r,
                    col: c,
                    detail: format!(
                        "entry {} from {} to {}",
                        p.display(&cx.vars),
                        cx.modules[i][c].tag,
                        cx.modules[i - 1][r].tag
                    ),
                });
            }
        }
    }
    for k in 1..cx.diffs.len() {
        let prod = cx.diffs[k - 1].compose(&cx.diffs[k]);
        for (r, c, p) in prod.entries() {
            failures.push(ComplexFailure {
                check: "d-squared".into(),
                degree: k + 1,
                row: r,
                col: c,
                detail: format!(
                    "composite is {} from {} to {}",
                    p.display(&cx.vars),
                    cx.modules[k + 1][c].tag,
                    cx.modules[k - 1][r].tag
                ),
            });
        }
    }
    ComplexReport { passed: failures.is_empty(), ranks: cx.ranks(), failures }
}

fn strand_indices(cx: &LabeledFreeComplex, b: &Monomial) -> Vec<Vec<usize>> {
    cx.modules
        .iter()
        .map(|m| (0..m.len()).filter(|&j| m[j].multidegree.divides(b)).collect())
        .collect()
}

/// Scalar matrix of `∂_i` restricted to the strand: the coefficient of
/// `deg(col)/deg(row)` in each entry.
fn strand_matrix(cx: &LabeledFreeComplex, i: usize, rows: &[usize], cols: &[usize]) -> Dense {
    let d = &cx.diffs[i - 1];
    let mut out = Dense::zeros(rows.len(), cols.len());
    let rpos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    for (cj, &c) in cols.iter().enumerate() {
        let cdeg = &cx.modules[i][c].multidegree;
        for (r, p) in d.column(c) {
            let Some(&ri) = rpos.get(r) else { continue };
            if let Ok(m) = cdeg.divide(&cx.modules[i - 1][*r].multidegree) {
                if let Some((_, v)) = p.terms().find(|(t, _)| **t == m) {
                    out.set(ri, cj, v.clone());
                }
            }
        }
    }
    out
}

/// Homology dimensions of the strand at multidegree `b`.
pub fn strand_homology(cx: &LabeledFreeComplex, b: &Monomial) -> Vec<usize> {
    let idx = strand_indices(cx, b);
    let ranks: Vec<usize> = (1..cx.modules.len())
        .map(|i| strand_matrix(cx, i, &idx[i - 1], &idx[i]).rank())
        .collect();
    (0..cx.modules.len())
        .map(|i| {
            let out = if i >= 1 { ranks[i - 1] } else { 0 };
            let inc = ranks.get(i).copied().unwrap_or(0);
            idx[i].len() - out - inc
        })
        .collect()
}

/// All lcms of sets of basis multidegrees, including the unit. Every strand
/// equals the strand at one of these.
pub fn lcm_closure(cx: &LabeledFreeComplex) -> Result<BTreeSet<Monomial>> {
    if cx.vars.len() > MAX_STRAND_VARS {
        return Err(Error::TooLarge(format!(
            "{} variables exceeds the strand limit of {MAX_STRAND_VARS}",
            cx.vars.len()
        )));
    }
    let mut set: BTreeSet<Monomial> = BTreeSet::from([cx.vars.one()]);
    let degs: BTreeSet<&Monomial> = cx.modules.iter().flatten().map(|l| &l.multidegree).collect();
    for d in degs {
        let new: Vec<Monomial> = set.iter().map(|s| s.lcm(d).expect("same ring")).collect();
        set.extend(new);
    }
    Ok(set)
}

/// Why a complex fails to resolve a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub presents_quotient: bool,
    pub presentation_detail: Option<String>,
    /// `(homological degree, multidegree, homology dimension)` for every
    /// nonvanishing positive-degree strand homology.
    pub nonexact: Vec<(usize, String, usize)>,
}

impl ResolutionReport {
    pub fn ok(&self) -> bool {
        self.presents_quotient && self.nonexact.is_empty()
    }
}

pub fn resolution_report(cx: &LabeledFreeComplex, ideal: &MonomialIdeal) -> Result<ResolutionReport> {
    if cx.vars != *ideal.vars() {
        return Err(Error::VarMismatch(cx.vars.len(), ideal.vars().len()));
    }
    let closure = lcm_closure(cx)?;
    let presentation_detail = presentation_problem(cx, ideal);
    let strands: Vec<&Monomial> = closure.iter().collect();
    let nonexact: Vec<(usize, String, usize)> = strands
        .par_iter()
        .flat_map_iter(|b| {
            strand_homology(cx, b)
                .into_iter()
                .enumerate()
                .skip(1)
                .filter(|(_, h)| *h != 0)
                .map(|(i, h)| (i, b.display(&cx.vars).to_string(), h))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ResolutionReport {
        presents_quotient: presentation_detail.is_none(),
        presentation_detail,
        nonexact,
    })
}

fn presentation_problem(cx: &LabeledFreeComplex, ideal: &MonomialIdeal) -> Option<String> {
    let f0 = cx.module(0);
    if f0.len() != 1 || !f0[0].multidegree.is_one() {
        return Some("degree 0 must be a single generator of multidegree 1".into());
    }
    let mut have: Vec<&Monomial> = cx.module(1).iter().map(|l| &l.multidegree).collect();
    let mut want: Vec<&Monomial> = ideal.generators().iter().collect();
    have.sort();
    want.sort();
    if have != want {
        return Some("degree-1 multidegrees differ from the ideal's generators".into());
    }
    if let Some(d) = cx.diff(1) {
        for (c, l) in cx.module(1).iter().enumerate() {
            let ok = d
                .get(0, c)
                .and_then(Polynomial::as_term)
                .is_some_and(|(_, m)| *m == l.multidegree);
            if !ok {
                return Some(format!("first differential on {} is not a unit times its generator", l.tag));
            }
        }
    }
    None
}

/// Whether `cx` is a free resolution of `Q/I`.
pub fn is_resolution_of(cx: &LabeledFreeComplex, ideal: &MonomialIdeal) -> Result<bool> {
    Ok(resolution_report(cx, ideal)?.ok())
}

/// No differential entry is a nonzero constant.
pub fn is_minimal(cx: &LabeledFreeComplex) -> bool {
    cx.diffs
        .iter()
        .all(|d| d.entries().all(|(_, _, p)| p.terms().all(|(m, _)| !m.is_one())))
}

/// Multigraded Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    vars: VarSet,
    graded: BTreeMap<(usize, Monomial), usize>,
}

impl BettiTable {
    pub fn graded(&self) -> &BTreeMap<(usize, Monomial), usize> {
        &self.graded
    }

    pub fn get(&self, i: usize, b: &Monomial) -> usize {
        self.graded.get(&(i, b.clone())).copied().unwrap_or(0)
    }

    pub fn totals(&self) -> Vec<usize> {
        let top = self.graded.keys().map(|(i, _)| *i).max().map_or(0, |m| m + 1);
        let mut out = vec![0; top];
        for ((i, _), v) in &self.graded {
            out[*i] += v;
        }
        out
    }

    pub fn projective_dimension(&self) -> usize {
        self.totals().len().saturating_sub(1)
    }

    /// Total degree grading `β_{i,j}`.
    pub fn by_total_degree(&self) -> BTreeMap<(usize, u32), usize> {
        let mut out = BTreeMap::new();
        for ((i, b), v) in &self.graded {
            *out.entry((*i, b.degree())).or_insert(0) += v;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let graded: Vec<serde_json::Value> = self
            .graded
            .iter()
            .map(|((i, b), v)| {
                serde_json::json!({"degree": i, "multidegree": b.display(&self.vars).to_string(), "value": v})
            })
            .collect();
        serde_json::json!({
            "totals": self.totals(),
            "projective_dimension": self.projective_dimension(),
            "graded": graded,
        })
    }
}

/// Betti numbers of the module resolved by `cx`, read off `cx ⊗ k`: labels
/// are grouped by exact multidegree and only constant entries survive.
pub fn tor_betti(cx: &LabeledFreeComplex) -> BettiTable {
    let mut groups: BTreeMap<&Monomial, Vec<Vec<usize>>> = BTreeMap::new();
    for (i, m) in cx.modules.iter().enumerate() {
        for (j, l) in m.iter().enumerate() {
            let g = groups
                .entry(&l.multidegree)
                .or_insert_with(|| vec![Vec::new(); cx.modules.len()]);
            g[i].push(j);
        }
    }
    let groups: Vec<(&Monomial, Vec<Vec<usize>>)> = groups.into_iter().collect();
    let graded = groups
        .par_iter()
        .flat_map_iter(|(b, idx)| {
            let ranks: Vec<usize> = (1..cx.modules.len())
                .map(|i| strand_matrix(cx, i, &idx[i - 1], &idx[i]).rank())
                .collect();
            (0..cx.modules.len())
                .map(|i| {
                    let out = if i >= 1 { ranks[i - 1] } else { 0 };
                    let inc = ranks.get(i).copied().unwrap_or(0);
                    ((i, (*b).clone()), idx[i].len() - out - inc)
                })
                .filter(|(_, v)| *v > 0)
                .collect::<Vec<_>>()
        })
        .collect();
    BettiTable { vars: cx.vars.clone(), graded }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff;

    fn vars() -> VarSet {
        VarSet::new(["x", "y"]).unwrap()
    }

    fn lab(name: &str, v: &VarSet, deg: &str) -> Label {
        Label { tag: Tag::Named(name.into()), multidegree: v.parse_monomial(deg).unwrap() }
    }

    fn poly(v: &VarSet, c: i64, m: &str) -> Polynomial {
        Polynomial::term(coeff(c), v.parse_monomial(m).unwrap())
    }

    /// Koszul complex on x, y.
    fn koszul() -> LabeledFreeComplex {
        let v = vars();
        let mut d1 = SparseMatrix::zeros(1, 2);
        d1.set(0, 0, poly(&v, 1, "x"));
        d1.set(0, 1, poly(&v, 1, "y"));
        let mut d2 = SparseMatrix::zeros(2, 1);
        d2.set(0, 0, poly(&v, -1, "y"));
        d2.set(1, 0, poly(&v, 1, "x"));
        LabeledFreeComplex::new(
            v.clone(),
            vec![
                vec![lab("1", &v, "1")],
                vec![lab("a", &v, "x"), lab("b", &v, "y")],
                vec![lab("ab", &v, "x*y")],
            ],
            vec![d1, d2],
        )
        .unwrap()
    }

    #[test]
    fn koszul_resolves() {
        let k = koszul();
        assert!(verify_complex(&k).passed);
        let i = MonomialIdeal::parse(vars(), "x, y").unwrap();
        assert!(is_resolution_of(&k, &i).unwrap());
        assert!(is_minimal(&k));
        assert_eq!(tor_betti(&k).totals(), vec![1, 2, 1]);
        assert_eq!(strand_homology(&k, &vars().one()), vec![1, 0, 0]);
    }

    #[test]
    fn sign_flip_breaks_d_squared() {
        let mut k = koszul();
        k.set_entry(2, 0, 0, poly(&vars(), 1, "y"));
        let r = verify_complex(&k);
        assert!(!r.passed);
        assert_eq!(r.failures[0].check, "d-squared");
        assert_eq!((r.failures[0].row, r.failures[0].col), (0, 0));
    }

    #[test]
    fn zero_complex_passes() {
        let z = LabeledFreeComplex::zero(vars());
        assert!(verify_complex(&z).passed);
        assert!(is_minimal(&z));
    }

    #[test]
    fn json_round_trip() {
        let k = koszul();
        let text = serde_json::to_string(&k.to_json()).unwrap();
        assert_eq!(LabeledFreeComplex::from_json(&text).unwrap(), k);
    }

    #[test]
    fn cone_over_zero_map_is_direct_sum() {
        let k = koszul();
        let psi = ChainMap::new(k.clone(), k.clone(), vec![]).unwrap();
        let c = mapping_cone(&psi);
        assert_eq!(c.ranks(), vec![1, 3, 3, 1]);
        assert!(verify_complex(&c).passed);
    }

    #[test]
    fn identity_cone_is_exact() {
        let k = koszul();
        let id = (0..3)
            .map(|i| {
                let mut m = SparseMatrix::zeros(k.rank(i), k.rank(i));
                for j in 0..k.rank(i) {
                    m.set(j, j, Polynomial::constant(coeff(1), 2));
                }
                m
            })
            .collect();
        let c = mapping_cone(&ChainMap::new(k.clone(), k, id).unwrap());
        assert!(verify_complex(&c).passed);
        let b = vars().parse_monomial("x*y").unwrap();
        assert!(strand_homology(&c, &b).iter().all(|&h| h == 0));
    }

    #[test]
    fn non_chain_map_rejected() {
        let k = koszul();
        let mut m1 = SparseMatrix::zeros(2, 2);
        m1.set(0, 0, Polynomial::constant(coeff(1), 2));
        assert!(matches!(
            ChainMap::new(k.clone(), k, vec![SparseMatrix::zeros(1, 1), m1]),
            Err(Error::NotChainMap(_))
        ));
    }

    #[test]
    fn truncated_resolution_is_not_exact() {
        let k = koszul();
        let t = LabeledFreeComplex::new(k.vars().clone(), k.modules()[..2].to_vec(), k.diffs()[..1].to_vec()).unwrap();
        let i = MonomialIdeal::parse(vars(), "x, y").unwrap();
        assert!(!is_resolution_of(&t, &i).unwrap());
    }

    #[test]
    fn subset_order_and_signs() {
        let a = Subset::from_indices([0, 2]);
        let b = Subset::from_indices([1]);
        assert_eq!(a.inversions(b), 1);
        assert_eq!(b.inversions(a), 1);
        assert!(Subset::from_indices([0, 3]) < Subset::from_indices([1, 2]));
        assert!(Subset::from_indices([5]) < Subset::from_indices([0, 1]));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,2]");
    }
}
