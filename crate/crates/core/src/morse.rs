//! Taylor graphs, Morse matchings on them and the reduction they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use num::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{BasisIndex, Chain, LabeledFreeComplex, SparseMatrix, Subset};
use crate::dg::SubmoduleSpan;
use crate::error::{Error, Result};
use crate::poly::{MonomialIdeal, Polynomial};
use crate::taylor::{subcomplex_on, subset_lcm, subset_positions, subsets_of_size, MAX_TAYLOR_GENERATORS};

/// A directed edge `source -> target` with `target = source ∖ {dropped}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub source: Subset,
    pub target: Subset,
}

impl Arc {
    pub fn new(source: Subset, target: Subset) -> Result<Self> {
        if !target.is_subset_of(source) || source.len() != target.len() + 1 {
            return Err(Error::InvalidMatching(format!("{source} -> {target} does not remove exactly one element")));
        }
        Ok(Arc { source, target })
    }

    /// The generator position removed along the arc.
    pub fn dropped(&self) -> usize {
        Subset(self.source.0 & !self.target.0).iter().next().expect("arc removes one element")
    }
}

/// Subsets of the generators joined by arcs `σ -> τ` where `τ` drops one
/// generator, `m_σ = m_τ` and `|τ| >= 2`.
#[derive(Clone, Debug)]
pub struct TaylorGraph {
    ideal: MonomialIdeal,
    arcs: BTreeSet<Arc>,
}

impl TaylorGraph {
    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn generators(&self) -> usize {
        self.ideal.len()
    }

    /// Generator names of a subset, e.g. `{x*y,y*z}`.
    pub fn subset_name(&self, s: Subset) -> String {
        subset_name(&self.ideal, s)
    }
}

pub fn subset_name(ideal: &MonomialIdeal, s: Subset) -> String {
    let names: Vec<String> = s
        .iter()
        .map(|i| ideal.generators()[i].display(ideal.vars()).to_string())
        .collect();
    format!("{{{}}}", names.join(","))
}

pub fn taylor_graph(ideal: &MonomialIdeal) -> Result<TaylorGraph> {
    let t = ideal.len();
    if t > MAX_TAYLOR_GENERATORS {
        return Err(Error::TooLarge(format!("{t} generators exceeds the limit of {MAX_TAYLOR_GENERATORS}")));
    }
    let arcs = (3..=t)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for s in subsets_of_size(t, k) {
                for i in s.iter() {
                    let tau = s.remove(i);
                    if ideal.generators()[i].divides(&subset_lcm(ideal, tau)) {
                        out.push(Arc { source: s, target: tau });
                    }
                }
            }
            out
        })
        .collect();
    Ok(TaylorGraph { ideal: ideal.clone(), arcs })
}

/// A set of Taylor graph arcs meant to be matched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorseMatching {
    arcs: BTreeSet<Arc>,
}

impl MorseMatching {
    pub fn new(arcs: impl IntoIterator<Item = Arc>) -> Self {
        MorseMatching { arcs: arcs.into_iter().collect() }
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Sources of the arcs.
    pub fn upper(&self) -> BTreeSet<Subset> {
        self.arcs.iter().map(|a| a.source).collect()
    }

    /// Targets of the arcs.
    pub fn lower(&self) -> BTreeSet<Subset> {
        self.arcs.iter().map(|a| a.target).collect()
    }

    pub fn matched(&self) -> BTreeSet<Subset> {
        self.upper().union(&self.lower()).copied().collect()
    }

    /// Dropped generator position of each arc.
    pub fn drops(&self) -> Vec<usize> {
        self.arcs.iter().map(Arc::dropped).collect()
    }

    /// Number of matched subsets of each size.
    pub fn matched_per_size(&self, t: usize) -> Vec<usize> {
        let mut out = vec![0; t + 1];
        for s in self.matched() {
            out[s.len()] += 1;
        }
        out
    }

    pub fn to_doc(&self, ideal: &MonomialIdeal) -> MatchingDoc {
        let g = |s: Subset| {
            s.iter()
                .map(|i| GenRef::Name(ideal.generators()[i].display(ideal.vars()).to_string()))
                .collect()
        };
        MatchingDoc {
            arcs: self.arcs.iter().map(|a| ArcDoc { source: g(a.source), target: g(a.target) }).collect(),
        }
    }

    pub fn from_doc(doc: &MatchingDoc, ideal: &MonomialIdeal) -> Result<Self> {
        let resolve = |refs: &[GenRef]| -> Result<Subset> {
            let mut s = Subset::EMPTY;
            for r in refs {
                let i = match r {
                    GenRef::Index(i) if *i < ideal.len() => *i,
                    GenRef::Index(i) => return Err(Error::invalid(format!("generator index {i} out of range"))),
                    GenRef::Name(n) => {
                        let m = ideal.vars().parse_monomial(n)?;
                        ideal
                            .generators()
                            .iter()
                            .position(|g| *g == m)
                            .ok_or_else(|| Error::invalid(format!("{n} is not a generator")))?
                    }
                };
                s = s.insert(i);
            }
            Ok(s)
        };
        let arcs = doc
            .arcs
            .iter()
            .map(|a| Arc::new(resolve(&a.source)?, resolve(&a.target)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(MorseMatching::new(arcs))
    }
}

/// A generator referenced by position or by its monomial text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDoc {
    pub source: Vec<GenRef>,
    pub target: Vec<GenRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub arcs: Vec<ArcDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingValidation {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Checks that the arcs lie in the graph, share no endpoints, and that
/// reversing them leaves the graph acyclic.
pub fn check_matching(g: &TaylorGraph, m: &MorseMatching) -> MatchingValidation {
    let mut problems = Vec::new();
    let name = |s: Subset| g.subset_name(s);
    for a in &m.arcs {
        if !g.arcs.contains(a) {
            problems.push(format!("{} -> {} is not a Taylor graph arc", name(a.source), name(a.target)));
        }
    }
    let mut seen: HashMap<Subset, Arc> = HashMap::new();
    for a in &m.arcs {
        for s in [a.source, a.target] {
            if let Some(b) = seen.insert(s, *a) {
                problems.push(format!(
                    "{} is shared by {} -> {} and {} -> {}",
                    name(s),
                    name(b.source),
                    name(b.target),
                    name(a.source),
                    name(a.target)
                ));
            }
        }
    }
    // Cycles in the modified graph alternate between two adjacent sizes.
    let mut by_size: BTreeMap<usize, Vec<Arc>> = BTreeMap::new();
    for a in &g.arcs {
        by_size.entry(a.target.len()).or_default().push(*a);
    }
    for (k, arcs) in by_size {
        if let Some(cycle_at) = layer_cycle(&arcs, &m.arcs) {
            problems.push(format!(
                "reversing the matching creates a directed cycle between sizes {k} and {} through {}",
                k + 1,
                name(cycle_at)
            ));
        }
    }
    MatchingValidation { valid: problems.is_empty(), problems }
}

pub fn validate_matching(g: &TaylorGraph, m: &MorseMatching) -> bool {
    check_matching(g, m).valid
}

/// Kahn's algorithm on one layer; returns a vertex left on a cycle.
fn layer_cycle(arcs: &[Arc], matched: &BTreeSet<Arc>) -> Option<Subset> {
    let mut out: HashMap<Subset, Vec<Subset>> = HashMap::new();
    let mut indeg: HashMap<Subset, usize> = HashMap::new();
    for a in arcs {
        let (from, to) = if matched.contains(a) { (a.target, a.source) } else { (a.source, a.target) };
        out.entry(from).or_default().push(to);
        *indeg.entry(to).or_default() += 1;
        indeg.entry(from).or_default();
    }
    let mut queue: VecDeque<Subset> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&s, _)| s).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        removed += 1;
        for w in out.get(&v).into_iter().flatten() {
            let d = indeg.get_mut(w).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(*w);
            }
        }
    }
    if removed == indeg.len() {
        None
    } else {
        indeg.into_iter().filter(|(_, d)| *d > 0).map(|(s, _)| s).min()
    }
}

/// Result of searching for the Lyubeznik drop of a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Drop {
    At(usize),
    None,
}

/// Least position `q` such that generator `q` divides the lcm of the
/// elements of `s` after `q`.
pub fn lyubeznik_drop(ideal: &MonomialIdeal, s: Subset) -> Drop {
    let t = ideal.len();
    for q in 0..t {
        let later = Subset(s.0 & !((1u64 << (q + 1)) - 1));
        if later.is_empty() {
            break;
        }
        if ideal.generators()[q].divides(&subset_lcm(ideal, later)) {
            return Drop::At(q);
        }
    }
    Drop::None
}

/// The Lyubeznik matching for the generators taken in `order`; arc
/// subsets index the reordered generators.
pub fn lyubeznik_matching(ideal: &MonomialIdeal, order: Option<&[usize]>) -> Result<MorseMatching> {
    let ideal = match order {
        Some(o) => ideal.reordered(o)?,
        None => ideal.clone(),
    };
    let t = ideal.len();
    if t > MAX_TAYLOR_GENERATORS {
        return Err(Error::TooLarge(format!("{t} generators")));
    }
    let arcs: BTreeSet<Arc> = (0..1u64 << t)
        .into_par_iter()
        .filter_map(|m| match lyubeznik_drop(&ideal, Subset(m)) {
            Drop::At(q) => Some(Arc { source: Subset(m).insert(q), target: Subset(m).remove(q) }),
            Drop::None => None,
        })
        .collect();
    let m = MorseMatching { arcs };
    if m.matched().len() != 2 * m.len() {
        return Err(Error::Internal("Lyubeznik arcs overlap".into()));
    }
    Ok(m)
}

/// Whether every superset of a source is again a source.
pub fn is_superset_closed(m: &MorseMatching, t: usize) -> bool {
    let up = m.upper();
    up.iter().all(|s| (0..t).filter(|&j| !s.contains(j)).all(|j| up.contains(&s.insert(j))))
}

/// Subsets of the upper set whose one-element extensions are missing.
pub fn superset_closure_gaps(m: &MorseMatching, t: usize) -> Vec<Subset> {
    let up = m.upper();
    let mut out: BTreeSet<Subset> = BTreeSet::new();
    for s in &up {
        for j in (0..t).filter(|&j| !s.contains(j)) {
            if !up.contains(&s.insert(j)) {
                out.insert(s.insert(j));
            }
        }
    }
    out.into_iter().collect()
}

/// Cancels matched pairs of a Taylor complex by unit-pivot elimination.
/// Pairs are processed by decreasing size of the source, ties in subset
/// order. Surviving basis elements keep their labels.
pub fn morse_reduce(t: &LabeledFreeComplex, m: &MorseMatching) -> Result<LabeledFreeComplex> {
    let pos = subset_positions(t);
    let mut diffs: Vec<SparseMatrix> = t.diffs().to_vec();
    let mut alive: Vec<Vec<bool>> = t.modules().iter().map(|m| vec![true; m.len()]).collect();
    let mut order: Vec<&Arc> = m.arcs.iter().collect();
    order.sort_by(|a, b| b.source.len().cmp(&a.source.len()).then(a.source.cmp(&b.source)));
    for a in order {
        let (Some(&s), Some(&r)) = (pos.get(&a.source), pos.get(&a.target)) else {
            return Err(Error::InvalidMatching(format!("{} -> {} is not in the complex", a.source, a.target)));
        };
        let k = s.degree;
        if !alive[k][s.index] || !alive[k - 1][r.index] {
            return Err(Error::InvalidMatching(format!("{} -> {} reuses a cancelled element", a.source, a.target)));
        }
        let d = &mut diffs[k - 1];
        let pivot = d
            .get(r.index, s.index)
            .and_then(Polynomial::as_nonzero_constant)
            .cloned()
            .ok_or_else(|| Error::InvalidMatching(format!("non-unit pivot at {} -> {}", a.source, a.target)))?;
        let pcol = d.column(s.index).clone();
        for c in 0..d.ncols() {
            if c == s.index || !alive[k][c] {
                continue;
            }
            let Some(f) = d.get(r.index, c).cloned() else { continue };
            let f = f.scale(&(num::BigRational::one() / &pivot));
            for (&row, p) in &pcol {
                d.add_to(row, c, &p.mul(&f).neg());
            }
        }
        alive[k][s.index] = false;
        alive[k - 1][r.index] = false;
    }
    let keep: Vec<Vec<usize>> = alive
        .iter()
        .map(|a| a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect())
        .collect();
    let modules = keep
        .iter()
        .enumerate()
        .map(|(k, ix)| ix.iter().map(|&i| t.module(k)[i].clone()).collect())
        .collect();
    let diffs = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| d.select(&keep[k], &keep[k + 1]))
        .collect();
    LabeledFreeComplex::new(t.vars().clone(), modules, diffs)
}

/// Whether a subset (positions under the chosen order) survives the
/// Lyubeznik condition.
pub fn is_lyubeznik_admissible(ideal: &MonomialIdeal, s: Subset) -> bool {
    let ix = s.indices();
    (0..ix.len()).all(|p| {
        let tail = Subset::from_indices(ix[p..].iter().copied());
        let l = subset_lcm(ideal, tail);
        (0..ix[p]).all(|q| !ideal.generators()[q].divides(&l))
    })
}

/// The Taylor subcomplex on Lyubeznik-admissible subsets.
pub fn lyubeznik_resolution(ideal: &MonomialIdeal, order: Option<&[usize]>) -> Result<LabeledFreeComplex> {
    let ideal = match order {
        Some(o) => ideal.reordered(o)?,
        None => ideal.clone(),
    };
    if !ideal.is_minimal() {
        return Err(Error::invalid("the ideal's generators are not minimal"));
    }
    let t = ideal.len();
    if t > MAX_TAYLOR_GENERATORS {
        return Err(Error::TooLarge(format!("{t} generators")));
    }
    let subsets: Vec<Vec<Subset>> = (0..=t)
        .map(|k| {
            subsets_of_size(t, k)
                .into_iter()
                .filter(|&s| is_lyubeznik_admissible(&ideal, s))
                .collect()
        })
        .collect();
    subcomplex_on(&ideal, &subsets)
}

/// The submodule spanned by `e_σ` and `∂e_σ` over the sources of the
/// matching; `∂e_σ` is pivoted at the matched target.
pub fn matching_submodule(t: &LabeledFreeComplex, m: &MorseMatching) -> Result<SubmoduleSpan> {
    let pos = subset_positions(t);
    let nv = t.vars().len();
    let mut span = SubmoduleSpan::new();
    for a in &m.arcs {
        let (Some(&s), Some(&r)) = (pos.get(&a.source), pos.get(&a.target)) else {
            return Err(Error::InvalidMatching(format!("{} -> {} is not in the complex", a.source, a.target)));
        };
        let e = Chain::basis(s, nv);
        span.push(t.apply_diff(&e), Some(r));
        span.push(e, Some(s));
    }
    Ok(span)
}

/// Basis element of a Taylor complex for a subset.
pub fn subset_chain(t: &LabeledFreeComplex, s: Subset) -> Option<Chain> {
    let b: BasisIndex = *subset_positions(t).get(&s)?;
    Some(Chain::basis(b, t.vars().len()))
}

/// Graphviz rendering with one column per subset size; matched arcs are
/// drawn reversed and highlighted.
pub fn to_dot(g: &TaylorGraph, m: Option<&MorseMatching>) -> String {
    let t = g.generators();
    let matched: BTreeSet<Arc> = m.map(|m| m.arcs.clone()).unwrap_or_default();
    let mut nodes: BTreeSet<Subset> = g.arcs.iter().flat_map(|a| [a.source, a.target]).collect();
    if t <= 10 {
        nodes.extend((2..=t).flat_map(|k| subsets_of_size(t, k)));
    }
    let id = |s: Subset| format!("s{}", s.indices().iter().join("_"));
    let mut out = String::new();
    writeln!(out, "digraph taylor {{").unwrap();
    writeln!(out, "  rankdir=RL;").unwrap();
    writeln!(out, "  node [shape=box, fontsize=10];").unwrap();
    for (k, group) in &nodes.iter().chunk_by(|s| s.len()) {
        writeln!(out, "  subgraph size{k} {{").unwrap();
        writeln!(out, "    rank=same;").unwrap();
        for s in group {
            writeln!(out, "    {} [label=\"{}\"];", id(*s), g.subset_name(*s)).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for a in &g.arcs {
        let drop = g.ideal.generators()[a.dropped()].display(g.ideal.vars()).to_string();
        if matched.contains(a) {
            writeln!(
                out,
                "  {} -> {} [dir=back, color=red, penwidth=2, label=\"{drop}\"];",
                id(a.source),
                id(a.target)
            )
            .unwrap();
        } else {
            writeln!(out, "  {} -> {};", id(a.source), id(a.target)).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
