//! Deciding which trees and cycles have a DG algebra minimal resolution,
//! with certificates that can be checked again from their payload.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combin::{build_family, edge_ideal, graph_diameter, FamilySpec, Graph};
use crate::complex::{is_minimal, is_resolution_of, Subset};
use crate::dg::{dg_check, dg_ideal_closure, quotient_dg, submodule_membership, ClosureReport, DgReport};
use crate::diam4::{build_cone_resolution, star_decompose, StarSummary};
use crate::error::{Error, Result};
use crate::morse::{
    is_superset_closed, lyubeznik_matching, matching_submodule, morse_reduce, subset_chain, subset_name, taylor_graph,
    validate_matching, Arc, ArcDoc, GenRef, MatchingDoc, MorseMatching,
};
use crate::poly::{IdealDoc, MonomialIdeal};
use crate::taylor::{graded_betti, taylor_dg, taylor_resolution};

fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

/// Total Betti numbers of the Lyubeznik graph `L(a,b,c)` and the projective
/// dimension `max(a+c+1, b+c+1)`.
pub fn lyubeznik_betti(a: usize, b: usize, c: usize) -> (Vec<usize>, usize) {
    let (p, q) = (a + c + 1, b + c + 1);
    let pd = p.max(q);
    let mut betti = vec![1, a + b + 2 * c + 1];
    betti.extend((2..=pd).map(|i| choose(p, i) + choose(q, i)));
    while betti.len() > 2 && betti.last() == Some(&0) {
        betti.pop();
    }
    let pd = betti.len() - 1;
    (betti, pd)
}

/// The first place a vector fails the Kruskal–Katona bound. `index` is the
/// face size `k` whose count `value` forces more than `available` faces of
/// size `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KkFailure {
    pub index: usize,
    pub value: usize,
    /// `(a, i)` pairs with `value = Σ C(a, i)`.
    pub cascade: Vec<(usize, usize)>,
    pub bound: usize,
    pub available: usize,
}

impl KkFailure {
    /// Cascade form, e.g. `2 = C(4,4)+C(3,3)`.
    pub fn cascade_text(&self) -> String {
        let terms: Vec<String> = self.cascade.iter().map(|(a, i)| format!("C({a},{i})")).collect();
        format!("{} = {}", self.value, terms.join("+"))
    }

    /// Shadow comparison, e.g. `C(4,3)+C(3,2) = 7 > 6`.
    pub fn bound_text(&self) -> String {
        let terms: Vec<String> = self.cascade.iter().map(|(a, i)| format!("C({a},{})", i - 1)).collect();
        format!("{} = {} > {}", terms.join("+"), self.bound, self.available)
    }
}

impl fmt::Display for KkFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at index {}: {}, and {}", self.index, self.cascade_text(), self.bound_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KkResult {
    pub is_fvector: bool,
    pub failure: Option<KkFailure>,
}

/// `(a_k, k), (a_{k-1}, k-1), ...` with `n = Σ C(a_i, i)` and `a_k > a_{k-1} > ...`.
pub fn cascade(mut n: usize, mut k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    while n > 0 && k > 0 {
        let mut a = k;
        while choose(a + 1, k) <= n {
            a += 1;
        }
        out.push((a, k));
        n -= choose(a, k);
        k -= 1;
    }
    out
}

/// Kruskal–Katona test on `v = (f_{-1}, f_0, f_1, ...)`, where `v[k]` counts
/// faces with `k` vertices.
pub fn kruskal_katona_is_fvector(v: &[usize]) -> KkResult {
    if v.first().is_some_and(|&e| e > 1) {
        let failure = KkFailure { index: 0, value: v[0], cascade: Vec::new(), bound: v[0], available: 1 };
        return KkResult { is_fvector: false, failure: Some(failure) };
    }
    for k in 1..v.len() {
        let c = cascade(v[k], k);
        let bound: usize = c.iter().map(|&(a, i)| choose(a, i - 1)).sum();
        if bound > v[k - 1] {
            let failure = KkFailure { index: k, value: v[k], cascade: c, bound, available: v[k - 1] };
            return KkResult { is_fvector: false, failure: Some(failure) };
        }
    }
    KkResult { is_fvector: true, failure: None }
}

/// A result from the literature that the classification relies on without
/// recomputing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedFact {
    pub key: String,
    pub statement: String,
    pub source: String,
}

pub const PATH_FIVE: &str = "path-five-edges";
pub const SMALL_CYCLES: &str = "small-cycles";

/// The cited-fact table.
pub fn cited_facts() -> Vec<CitedFact> {
    vec![
        CitedFact {
            key: PATH_FIVE.into(),
            statement: "The minimal free resolution of Q/I for the edge ideal of the path with five edges carries no DG algebra structure."
                .into(),
            source: "Katthän 2019, via Avramov's 1981 example and polarization".into(),
        },
        CitedFact {
            key: SMALL_CYCLES.into(),
            statement: "For cycles on three or four vertices the minimal free resolution of Q/I carries a DG algebra structure."
                .into(),
            source: "Buchsbaum–Eisenbud 1977 (resolutions of length at most three)".into(),
        },
    ]
}

pub fn cited_fact(key: &str) -> Option<CitedFact> {
    cited_facts().into_iter().find(|f| f.key == key)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Dg,
    NotDg,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Dg => "dg",
            Verdict::NotDg => "not-dg",
        })
    }
}

/// One term `coefficient * generator` of a membership witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub coefficient: String,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// The Taylor resolution is already minimal.
    TaylorMinimal { ideal: IdealDoc },
    /// A Lyubeznik matching under `order` (position `k` holds generator
    /// `order[k]`) whose sources are closed under supersets.
    LyubeznikMatching {
        ideal: IdealDoc,
        order: Vec<usize>,
        matching: MatchingDoc,
        superset_closed: bool,
        ranks: Vec<usize>,
    },
    /// The diameter-four cone and its product, checked axiom by axiom.
    ConePsi { decomposition: StarSummary, ranks: Vec<usize>, report: DgReport },
    /// A Morse matching whose induced submodule is a DG ideal, with the
    /// quotient checked.
    MorseDgIdeal {
        ideal: IdealDoc,
        matching: MatchingDoc,
        superset_closed: bool,
        closure: ClosureReport,
        /// Expresses the first non-source of a superset gap inside the ideal.
        gap: String,
        witness: Vec<WitnessTerm>,
        ranks: Vec<usize>,
        report: DgReport,
    },
    /// Deleting `removed` leaves a graph whose facet-induced part is the
    /// cited non-DG path.
    PruningWitness { removed: Vec<String>, remaining: Graph, fact: CitedFact },
    /// The Betti vector is not an f-vector.
    FVectorFailure { betti: Vec<usize>, failure: KkFailure },
    Cited { fact: CitedFact },
}

impl Evidence {
    pub fn name(&self) -> &'static str {
        match self {
            Evidence::TaylorMinimal { .. } => "taylor-minimal",
            Evidence::LyubeznikMatching { .. } => "lyubeznik-matching",
            Evidence::ConePsi { .. } => "cone-psi",
            Evidence::MorseDgIdeal { .. } => "morse-dg-ideal",
            Evidence::PruningWitness { .. } => "pruning-witness",
            Evidence::FVectorFailure { .. } => "f-vector-failure",
            Evidence::Cited { .. } => "cited",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub subject: Graph,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

fn dg_ranks(ideal: &MonomialIdeal, order: &[usize]) -> Result<(MonomialIdeal, MorseMatching, Vec<usize>, bool)> {
    let reordered = ideal.reordered(order)?;
    let m = lyubeznik_matching(&reordered, None)?;
    let t = taylor_resolution(&reordered, None)?;
    let r = morse_reduce(&t, &m)?;
    let ok = is_minimal(&r) && is_resolution_of(&r, &reordered)?;
    Ok((reordered, m, r.ranks(), ok))
}

/// `removed` holds every vertex off six consecutive vertices of `path`.
fn path_witness(g: &Graph, path: &[usize]) -> Result<Evidence> {
    let keep = &path[..6];
    let removed: Vec<usize> = (0..g.num_vertices()).filter(|v| !keep.contains(v)).collect();
    Ok(Evidence::PruningWitness {
        removed: removed.iter().map(|&v| g.vertices()[v].clone()).collect(),
        remaining: g.without_vertices(&removed),
        fact: cited_fact(PATH_FIVE).ok_or_else(|| Error::Internal("missing cited fact".into()))?,
    })
}

/// Trees: diameter at most two gives a minimal Taylor resolution, three a
/// Lyubeznik resolution with the central edge first, four the cone
/// construction, and five or more a pruning down to the path with five edges.
pub fn classify_tree(g: &Graph) -> Result<Certificate> {
    if !g.is_tree() {
        return Err(Error::invalid("graph is not a tree"));
    }
    let d = graph_diameter(g);
    let ideal = edge_ideal(g);
    let (verdict, evidence) = match d {
        0..=2 => (Verdict::Dg, Evidence::TaylorMinimal { ideal: IdealDoc::from_ideal(&ideal) }),
        3 => {
            let path = g.tree_longest_path()?;
            let central = (path[1].min(path[2]), path[1].max(path[2]));
            let k = g
                .edges()
                .iter()
                .position(|&(a, b)| (a.min(b), a.max(b)) == central)
                .ok_or_else(|| Error::Internal("central edge missing".into()))?;
            let mut order = vec![k];
            order.extend((0..ideal.len()).filter(|&i| i != k));
            let (reordered, m, ranks, _) = dg_ranks(&ideal, &order)?;
            let evidence = Evidence::LyubeznikMatching {
                ideal: IdealDoc::from_ideal(&ideal),
                superset_closed: is_superset_closed(&m, reordered.len()),
                matching: m.to_doc(&reordered),
                order,
                ranks,
            };
            (Verdict::Dg, evidence)
        }
        4 => {
            let cone = build_cone_resolution(g)?;
            let evidence = Evidence::ConePsi {
                decomposition: cone.decomposition.summary(),
                ranks: cone.complex().ranks(),
                report: dg_check(&cone.dg),
            };
            (Verdict::Dg, evidence)
        }
        _ if is_path_with_five_edges(g) => (
            Verdict::NotDg,
            Evidence::Cited { fact: cited_fact(PATH_FIVE).ok_or_else(|| Error::Internal("missing cited fact".into()))? },
        ),
        _ => (Verdict::NotDg, path_witness(g, &g.tree_longest_path()?)?),
    };
    Ok(Certificate { subject: g.clone(), verdict, evidence })
}

/// The vertices of a cycle in walking order starting from vertex 0.
fn cycle_order(g: &Graph) -> Vec<usize> {
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = g.neighbors(cur).into_iter().filter(|&w| w != prev).min().unwrap();
        if next == 0 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}

/// The same cycle with vertices in walking order and edges
/// `v_1v_2, ..., v_{n-1}v_n, v_1v_n`, matching the `C_n` family layout.
pub fn normalize_cycle(g: &Graph) -> Result<Graph> {
    if !g.is_cycle() {
        return Err(Error::invalid("graph is not a cycle"));
    }
    let order = cycle_order(g);
    let n = order.len();
    let names: Vec<String> = order.iter().map(|&v| g.vertices()[v].clone()).collect();
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    Graph::new(names, edges)
}

/// The Morse matching on the Taylor graph of the five-cycle with generators
/// `v1v2, v2v3, v3v4, v4v5, v1v5` (positions 0..5).
pub fn five_cycle_matching() -> MorseMatching {
    let s = |ix: &[usize]| Subset::from_indices(ix.iter().copied());
    let arcs = [
        (&[0, 1, 2, 4][..], &[0, 2, 4][..]),
        (&[0, 1, 2], &[0, 2]),
        (&[0, 1, 3, 4], &[0, 1, 3]),
        (&[0, 1, 4], &[1, 4]),
        (&[0, 1, 2, 3, 4], &[0, 1, 2, 3]),
        (&[2, 3, 4], &[2, 4]),
        (&[0, 3, 4], &[0, 3]),
        (&[0, 2, 3, 4], &[0, 2, 3]),
        (&[1, 2, 3], &[1, 3]),
        (&[1, 2, 3, 4], &[1, 2, 4]),
    ];
    MorseMatching::new(arcs.iter().map(|(a, b)| Arc::new(s(a), s(b)).expect("fixture arcs drop one element")))
}

fn index_doc(m: &MorseMatching) -> MatchingDoc {
    let refs = |s: Subset| s.iter().map(GenRef::Index).collect();
    MatchingDoc {
        arcs: m.arcs().iter().map(|a| ArcDoc { source: refs(a.source), target: refs(a.target) }).collect(),
    }
}

struct MorseEvidence {
    valid: bool,
    superset_closed: bool,
    closure: ClosureReport,
    gap: String,
    witness: Vec<WitnessTerm>,
    ranks: Vec<usize>,
    minimal: bool,
    resolution: bool,
    report: DgReport,
}

/// Validates a matching and checks that its submodule is a DG ideal; for
/// the first superset gap, records how the gap lies in the ideal.
fn morse_evidence(ideal: &MonomialIdeal, m: &MorseMatching) -> Result<MorseEvidence> {
    let graph = taylor_graph(ideal)?;
    let valid = validate_matching(&graph, m);
    let t = taylor_dg(ideal, None)?;
    let span = matching_submodule(t.complex(), m)?;
    let mut names = Vec::new();
    for a in m.arcs() {
        names.push(format!("d{}", subset_name(ideal, a.source)));
        names.push(subset_name(ideal, a.source));
    }
    let closure = dg_ideal_closure(&t, &span)?;
    let gaps = crate::morse::superset_closure_gaps(m, ideal.len());
    let (gap, witness) = match gaps.first() {
        Some(&g) => {
            let e = subset_chain(t.complex(), g).ok_or_else(|| Error::Internal("gap outside the complex".into()))?;
            let mem = submodule_membership(t.complex(), &e, &span)?;
            let terms = mem
                .witness
                .iter()
                .map(|(k, p)| WitnessTerm {
                    coefficient: p.display(ideal.vars()).to_string(),
                    generator: names[*k].clone(),
                })
                .collect();
            (subset_name(ideal, g), terms)
        }
        None => (String::new(), Vec::new()),
    };
    let q = quotient_dg(&t, &span)?;
    Ok(MorseEvidence {
        valid,
        superset_closed: gaps.is_empty(),
        closure,
        gap,
        witness,
        ranks: q.complex().ranks(),
        minimal: is_minimal(q.complex()),
        resolution: is_resolution_of(q.complex(), ideal)?,
        report: dg_check(&q),
    })
}

/// Cycles: three and four vertices by the cited result, five by the fixed
/// Morse matching, six by the f-vector obstruction, seven or more by
/// pruning to a path with five edges.
pub fn classify_cycle_graph(g: &Graph) -> Result<Certificate> {
    let g = normalize_cycle(g)?;
    let n = g.num_vertices();
    let (verdict, evidence) = match n {
        3 | 4 => (
            Verdict::Dg,
            Evidence::Cited { fact: cited_fact(SMALL_CYCLES).ok_or_else(|| Error::Internal("missing cited fact".into()))? },
        ),
        5 => {
            let ideal = edge_ideal(&g);
            let m = five_cycle_matching();
            let ev = morse_evidence(&ideal, &m)?;
            let evidence = Evidence::MorseDgIdeal {
                ideal: IdealDoc::from_ideal(&ideal),
                matching: index_doc(&m),
                superset_closed: ev.superset_closed,
                closure: ev.closure,
                gap: ev.gap,
                witness: ev.witness,
                ranks: ev.ranks,
                report: ev.report,
            };
            (Verdict::Dg, evidence)
        }
        6 => {
            let betti = graded_betti(&edge_ideal(&g))?.totals();
            let failure = kruskal_katona_is_fvector(&betti)
                .failure
                .ok_or_else(|| Error::Internal("the Betti vector passed the f-vector test".into()))?;
            (Verdict::NotDg, Evidence::FVectorFailure { betti, failure })
        }
        _ => {
            // walk from the second vertex so the first one is deleted
            let path: Vec<usize> = (1..n).collect();
            (Verdict::NotDg, path_witness(&g, &path)?)
        }
    };
    Ok(Certificate { subject: g, verdict, evidence })
}

pub fn classify_cycle(n: usize) -> Result<Certificate> {
    if n < 3 {
        return Err(Error::invalid("a cycle needs at least three vertices"));
    }
    classify_cycle_graph(&build_family(&FamilySpec::Cycle(n))?)
}

/// Trees and cycles only.
pub fn classify_graph(g: &Graph) -> Result<Certificate> {
    if g.is_tree() {
        classify_tree(g)
    } else if g.is_cycle() {
        classify_cycle_graph(g)
    } else {
        Err(Error::invalid("only trees and cycles are classified"))
    }
}

/// Outcome of re-running a certificate's checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub checks: Vec<(String, bool)>,
}

fn is_path_with_five_edges(g: &Graph) -> bool {
    let live: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.degree(v) > 0).collect();
    let h = g.induced(&live);
    h.is_tree() && h.edges().len() == 5 && (0..h.num_vertices()).all(|v| h.degree(v) <= 2)
}

/// Recomputes everything a certificate claims from its own payload.
pub fn verify_certificate(c: &Certificate) -> Result<CertificateCheck> {
    let g = &c.subject;
    let ideal = edge_ideal(g);
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut check = |name: &str, ok: bool| checks.push((name.to_string(), ok));
    match &c.evidence {
        Evidence::TaylorMinimal { ideal: doc } => {
            check("verdict", c.verdict == Verdict::Dg);
            check("ideal matches subject", doc.to_ideal()? == ideal);
            check("taylor is minimal", is_minimal(&taylor_resolution(&ideal, None)?));
        }
        Evidence::LyubeznikMatching { ideal: doc, order, matching, superset_closed, ranks } => {
            check("verdict", c.verdict == Verdict::Dg);
            check("ideal matches subject", doc.to_ideal()? == ideal);
            let (reordered, m, got, ok) = dg_ranks(&ideal, order)?;
            check("matching matches", MorseMatching::from_doc(matching, &reordered)? == m);
            check("matching is valid", validate_matching(&taylor_graph(&reordered)?, &m));
            check("superset closed", *superset_closed && is_superset_closed(&m, reordered.len()));
            check("ranks", &got == ranks);
            check("minimal resolution", ok);
        }
        Evidence::ConePsi { decomposition, ranks, report } => {
            check("verdict", c.verdict == Verdict::Dg);
            check("decomposition", star_decompose(g)?.summary() == *decomposition);
            let cone = build_cone_resolution(g)?;
            check("ranks", cone.complex().ranks() == *ranks);
            check("minimal", is_minimal(cone.complex()));
            check("resolution", is_resolution_of(cone.complex(), &cone.decomposition.edge_ideal())?);
            let fresh = dg_check(&cone.dg);
            check("dg axioms", fresh.passed && report.passed);
            check("report matches", fresh == *report);
        }
        Evidence::MorseDgIdeal { ideal: doc, matching, superset_closed, closure, gap, witness, ranks, report } => {
            check("verdict", c.verdict == Verdict::Dg);
            check("ideal matches subject", doc.to_ideal()? == ideal);
            let m = MorseMatching::from_doc(matching, &ideal)?;
            let ev = morse_evidence(&ideal, &m)?;
            check("matching is valid", ev.valid);
            check("superset closure flag", ev.superset_closed == *superset_closed);
            check("dg ideal", ev.closure.is_dg_ideal && closure.is_dg_ideal);
            check("gap witness", ev.gap == *gap && ev.witness == *witness);
            check("ranks", ev.ranks == *ranks);
            check("minimal resolution", ev.minimal && ev.resolution);
            check("dg axioms", ev.report.passed && report.passed);
        }
        Evidence::PruningWitness { removed, remaining, fact } => {
            check("verdict", c.verdict == Verdict::NotDg);
            let ix: Vec<usize> = removed
                .iter()
                .map(|n| g.vertex_index(n).ok_or_else(|| Error::invalid(format!("unknown vertex {n}"))))
                .collect::<Result<_>>()?;
            check("remaining graph", g.without_vertices(&ix) == *remaining);
            check("remaining is the path with five edges", is_path_with_five_edges(remaining));
            check("cited fact", cited_fact(PATH_FIVE).as_ref() == Some(fact));
        }
        Evidence::FVectorFailure { betti, failure } => {
            check("verdict", c.verdict == Verdict::NotDg);
            check("betti numbers", graded_betti(&ideal)?.totals() == *betti);
            check("kruskal-katona", kruskal_katona_is_fvector(betti).failure.as_ref() == Some(failure));
        }
        Evidence::Cited { fact } if fact.key == PATH_FIVE => {
            check("verdict", c.verdict == Verdict::NotDg);
            check("path with five edges", is_path_with_five_edges(g));
            check("cited fact", cited_fact(PATH_FIVE).as_ref() == Some(fact));
        }
        Evidence::Cited { fact } => {
            check("verdict", c.verdict == Verdict::Dg);
            check("small cycle", g.is_cycle() && g.num_vertices() <= 4);
            check("cited fact", cited_fact(SMALL_CYCLES).as_ref() == Some(fact));
        }
    }
    let passed = checks.iter().all(|(_, ok)| *ok);
    Ok(CertificateCheck { passed, checks })
}
