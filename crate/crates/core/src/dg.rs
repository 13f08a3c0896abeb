//! Products on labeled complexes: axiom checks, multigraded submodule
//! membership, dg ideals and quotients.

use std::collections::BTreeMap;

use num::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{BasisIndex, Chain, ComplexDoc, LabeledFreeComplex, SparseMatrix};
use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::poly::{Coeff, Polynomial};

/// Witnesses kept per axiom in a report.
const MAX_WITNESSES: usize = 25;

/// A bilinear product given on pairs of basis elements.
#[derive(Clone, Debug)]
pub struct DgStructure {
    complex: LabeledFreeComplex,
    unit: BasisIndex,
    offsets: Vec<usize>,
    table: Vec<Option<Chain>>,
}

impl DgStructure {
    /// Tabulates `f` on every ordered pair of basis elements.
    pub fn from_fn<F>(complex: LabeledFreeComplex, unit: BasisIndex, f: F) -> Result<Self>
    where
        F: Fn(BasisIndex, BasisIndex) -> Result<Chain> + Sync,
    {
        let basis = complex.basis();
        let n = basis.len();
        let offsets = offsets_of(&complex);
        let table = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let c = f(basis[k / n], basis[k % n])?;
                Ok((!c.is_zero()).then_some(c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DgStructure { complex, unit, offsets, table })
    }

    pub fn complex(&self) -> &LabeledFreeComplex {
        &self.complex
    }

    pub fn unit(&self) -> BasisIndex {
        self.unit
    }

    fn size(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn flat(&self, b: BasisIndex) -> usize {
        self.offsets[b.degree] + b.index
    }

    /// Product of two basis elements.
    pub fn product(&self, a: BasisIndex, b: BasisIndex) -> Chain {
        match &self.table[self.flat(a) * self.size() + self.flat(b)] {
            Some(c) => c.clone(),
            None => Chain::zero(a.degree + b.degree),
        }
    }

    fn product_ref(&self, a: BasisIndex, b: BasisIndex) -> Option<&Chain> {
        self.table[self.flat(a) * self.size() + self.flat(b)].as_ref()
    }

    /// Overwrites one table entry (used to build deliberately broken products).
    pub fn set_product(&mut self, a: BasisIndex, b: BasisIndex, value: Chain) {
        let k = self.flat(a) * self.size() + self.flat(b);
        self.table[k] = (!value.is_zero()).then_some(value);
    }

    /// Bilinear extension to chains.
    pub fn multiply(&self, x: &Chain, y: &Chain) -> Chain {
        let mut out = Chain::zero(x.degree + y.degree);
        for (&i, p) in &x.terms {
            for (&j, q) in &y.terms {
                let a = BasisIndex { degree: x.degree, index: i };
                let b = BasisIndex { degree: y.degree, index: j };
                if let Some(c) = self.product_ref(a, b) {
                    out.add_scaled(c, &p.mul(q));
                }
            }
        }
        out
    }

    pub fn basis_chain(&self, b: BasisIndex) -> Chain {
        Chain::basis(b, self.complex.vars().len())
    }

    fn name(&self, b: BasisIndex) -> String {
        self.complex.label(b).tag.to_string()
    }

    /// Nonzero products on basis pairs.
    pub fn nonzero_products(&self) -> Vec<(BasisIndex, BasisIndex, &Chain)> {
        let basis = self.complex.basis();
        let n = basis.len();
        self.table
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.as_ref().map(|c| (basis[k / n], basis[k % n], c)))
            .collect()
    }

    pub fn to_doc(&self) -> DgDoc {
        let vars = self.complex.vars();
        DgDoc {
            complex: self.complex.to_doc(),
            unit: self.unit,
            products: self
                .nonzero_products()
                .into_iter()
                .map(|(left, right, c)| ProductDoc {
                    left,
                    right,
                    value: c.terms.iter().map(|(&i, p)| (i, p.to_string_terms(vars))).collect(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &DgDoc) -> Result<Self> {
        let complex = LabeledFreeComplex::from_doc(&doc.complex)?;
        let vars = complex.vars().clone();
        let check = |b: BasisIndex| {
            if b.index < complex.rank(b.degree) {
                Ok(())
            } else {
                Err(Error::invalid(format!("basis index {b:?} out of range")))
            }
        };
        check(doc.unit)?;
        let mut entries = BTreeMap::new();
        for p in &doc.products {
            check(p.left)?;
            check(p.right)?;
            let mut c = Chain::zero(p.left.degree + p.right.degree);
            for (i, terms) in &p.value {
                if *i >= complex.rank(c.degree) {
                    return Err(Error::invalid("product term out of range"));
                }
                c.add_poly(*i, &Polynomial::from_string_terms(terms, &vars)?);
            }
            entries.insert((p.left, p.right), c);
        }
        DgStructure::from_fn(complex, doc.unit, |a, b| {
            Ok(entries.get(&(a, b)).cloned().unwrap_or_else(|| Chain::zero(a.degree + b.degree)))
        })
    }
}

fn offsets_of(cx: &LabeledFreeComplex) -> Vec<usize> {
    let mut offsets = vec![0];
    for m in cx.modules() {
        offsets.push(offsets.last().unwrap() + m.len());
    }
    offsets
}

/// Serialized product: nonzero values on basis pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DgDoc {
    pub complex: ComplexDoc,
    pub unit: BasisIndex,
    pub products: Vec<ProductDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductDoc {
    pub left: BasisIndex,
    pub right: BasisIndex,
    pub value: Vec<(usize, Vec<(String, String)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub elements: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub passed: bool,
    pub checked: usize,
    pub failure_count: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgReport {
    pub passed: bool,
    pub basis_size: usize,
    pub axioms: Vec<AxiomResult>,
}

impl DgReport {
    pub fn axiom(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == name)
    }
}

fn axiom(name: &str, checked: usize, mut failures: Vec<Witness>) -> AxiomResult {
    let failure_count = failures.len();
    failures.truncate(MAX_WITNESSES);
    AxiomResult {
        axiom: name.into(),
        passed: failure_count == 0,
        checked,
        failure_count,
        witnesses: failures,
    }
}

fn sign(odd: bool) -> Coeff {
    if odd {
        -Coeff::one()
    } else {
        Coeff::one()
    }
}

/// Exhaustive check of the dg algebra axioms on basis elements: unit,
/// degree, multidegree, graded commutativity, odd squares, associativity
/// and the Leibniz rule.
pub fn dg_check(d: &DgStructure) -> DgReport {
    let cx = &d.complex;
    let basis = cx.basis();
    let mut axioms = Vec::new();

    // unit
    let u = d.unit;
    let unit_ok = cx.label(u).multidegree.is_one() && u.degree == 0;
    let mut fails: Vec<Witness> = basis
        .par_iter()
        .filter_map(|&a| {
            let e = d.basis_chain(a);
            let (l, r) = (d.product(u, a), d.product(a, u));
            (l != e || r != e).then(|| Witness {
                elements: vec![d.name(a)],
                detail: format!("1*a = {}, a*1 = {}", l.display(cx), r.display(cx)),
            })
        })
        .collect();
    if !unit_ok {
        fails.insert(0, Witness { elements: vec![d.name(u)], detail: "unit is not in degree 0 with multidegree 1".into() });
    }
    axioms.push(axiom("unit", basis.len(), fails));

    // degree and multidegree
    let pairs: Vec<(BasisIndex, BasisIndex)> =
        basis.iter().flat_map(|&a| basis.iter().map(move |&b| (a, b))).collect();
    let degree_fails = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let c = d.product_ref(a, b)?;
            (c.degree != a.degree + b.degree || c.terms.keys().any(|&i| i >= cx.rank(c.degree))).then(|| Witness {
                elements: vec![d.name(a), d.name(b)],
                detail: format!("product lands in degree {}", c.degree),
            })
        })
        .collect();
    axioms.push(axiom("degree", pairs.len(), degree_fails));

    let homog_fails = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let c = d.product_ref(a, b)?;
            if c.degree != a.degree + b.degree || c.terms.keys().any(|&i| i >= cx.rank(c.degree)) {
                return None;
            }
            let want = &cx.label(a).multidegree * &cx.label(b).multidegree;
            match c.multidegree(cx) {
                Ok(Some(m)) if m == want => None,
                Ok(None) => None,
                _ => Some(Witness {
                    elements: vec![d.name(a), d.name(b)],
                    detail: format!("product {} is not of multidegree {}", c.display(cx), want.display(cx.vars())),
                }),
            }
        })
        .collect();
    axioms.push(axiom("multidegree", pairs.len(), homog_fails));

    // graded commutativity
    let comm_fails = pairs
        .par_iter()
        .filter(|(a, b)| d.flat(*a) <= d.flat(*b))
        .filter_map(|&(a, b)| {
            let ab = d.product(a, b);
            let ba = d.product(b, a).scale_coeff(&sign(a.degree * b.degree % 2 == 1));
            let mut diff = ab.clone();
            diff.add(&ba.neg());
            (!diff.is_zero()).then(|| Witness {
                elements: vec![d.name(a), d.name(b)],
                detail: format!("ab = {}, sign*ba = {}", ab.display(cx), ba.display(cx)),
            })
        })
        .collect();
    axioms.push(axiom("graded-commutativity", pairs.len(), comm_fails));

    // odd squares
    let odd: Vec<BasisIndex> = basis.iter().copied().filter(|b| b.degree % 2 == 1).collect();
    let sq_fails = odd
        .par_iter()
        .filter_map(|&a| {
            let s = d.multiply(&d.basis_chain(a), &d.basis_chain(a));
            (!s.is_zero()).then(|| Witness { elements: vec![d.name(a)], detail: format!("a^2 = {}", s.display(cx)) })
        })
        .collect();
    axioms.push(axiom("odd-squares", odd.len(), sq_fails));

    // associativity; triples with ab = 0 and bc = 0 hold trivially
    let n = basis.len();
    let assoc_fails: Vec<Witness> = basis
        .par_iter()
        .flat_map_iter(|&a| {
            let mut out = Vec::new();
            for &b in &basis {
                let ab = d.product_ref(a, b);
                for &c in &basis {
                    let bc = d.product_ref(b, c);
                    if ab.is_none() && bc.is_none() {
                        continue;
                    }
                    let lhs = ab.map_or_else(|| Chain::zero(0), |x| d.multiply(x, &d.basis_chain(c)));
                    let rhs = bc.map_or_else(|| Chain::zero(0), |y| d.multiply(&d.basis_chain(a), y));
                    if !chains_equal(&lhs, &rhs) {
                        out.push(Witness {
                            elements: vec![d.name(a), d.name(b), d.name(c)],
                            detail: format!("(ab)c = {}, a(bc) = {}", lhs.display(cx), rhs.display(cx)),
                        });
                    }
                }
            }
            out
        })
        .collect();
    axioms.push(axiom("associativity", n * n * n, assoc_fails));

    // Leibniz
    let leib_fails = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let ea = d.basis_chain(a);
            let eb = d.basis_chain(b);
            let lhs = cx.apply_diff(&d.product(a, b));
            let mut rhs = d.multiply(&cx.apply_diff(&ea), &eb);
            rhs.add(&d.multiply(&ea, &cx.apply_diff(&eb)).scale_coeff(&sign(a.degree % 2 == 1)));
            (!chains_equal(&lhs, &rhs)).then(|| Witness {
                elements: vec![d.name(a), d.name(b)],
                detail: format!(
                    "d(ab) = {}, d(a)b +- a d(b) = {}",
                    lhs.display(cx),
                    rhs.display(cx)
                ),
            })
        })
        .collect();
    axioms.push(axiom("leibniz", pairs.len(), leib_fails));

    DgReport { passed: axioms.iter().all(|a| a.passed), basis_size: n, axioms }
}

fn chains_equal(a: &Chain, b: &Chain) -> bool {
    (a.is_zero() && b.is_zero()) || a == b
}

/// A finite set of homogeneous generators of a submodule of a complex. A
/// generator may name a basis element that should serve as its pivot.
#[derive(Clone, Debug, Default)]
pub struct SubmoduleSpan {
    pub generators: Vec<Chain>,
    pub pivot_hints: Vec<Option<BasisIndex>>,
}

impl SubmoduleSpan {
    pub fn new() -> Self {
        SubmoduleSpan::default()
    }

    pub fn push(&mut self, g: Chain, hint: Option<BasisIndex>) {
        if !g.is_zero() {
            self.generators.push(g);
            self.pivot_hints.push(hint);
        }
    }

    pub fn extend(&mut self, other: &SubmoduleSpan) {
        self.generators.extend(other.generators.iter().cloned());
        self.pivot_hints.extend(other.pivot_hints.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Outcome of a membership test; `witness` expresses the element as
/// `Σ coefficient * generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Vec<(usize, Polynomial)>,
}

/// Decides `v ∈ S` by linear algebra in the multidegree strand of `v`.
pub fn submodule_membership(cx: &LabeledFreeComplex, v: &Chain, s: &SubmoduleSpan) -> Result<Membership> {
    let Some(b) = v.multidegree(cx)? else {
        return Ok(Membership { member: true, witness: Vec::new() });
    };
    let index: Vec<usize> = (0..cx.rank(v.degree))
        .filter(|&j| cx.module(v.degree)[j].multidegree.divides(&b))
        .collect();
    let mut cols = Vec::new();
    for (k, g) in s.generators.iter().enumerate() {
        if g.degree != v.degree {
            continue;
        }
        let Some(dg) = g.multidegree(cx)? else { continue };
        if let Ok(m) = b.divide(&dg) {
            cols.push((k, m, g.strand_vector(cx, &dg, &index)));
        }
    }
    let rhs = v.strand_vector(cx, &b, &index);
    let mut a = Dense::zeros(index.len(), cols.len());
    for (j, (_, _, col)) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            a.set(i, j, x.clone());
        }
    }
    Ok(match a.solve(&rhs) {
        None => Membership { member: false, witness: Vec::new() },
        Some(x) => Membership {
            member: true,
            witness: cols
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((k, m, _), c)| (k, Polynomial::term(c, m)))
                .collect(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub is_dg_ideal: bool,
    pub products_checked: usize,
    pub failures: Vec<Witness>,
}

/// Checks `∂S ⊆ S` (an error otherwise) and then `e·g ∈ S` for every basis
/// element `e` and generator `g`.
pub fn dg_ideal_closure(d: &DgStructure, s: &SubmoduleSpan) -> Result<ClosureReport> {
    let cx = &d.complex;
    for g in &s.generators {
        let dg = cx.apply_diff(g);
        if !submodule_membership(cx, &dg, s)?.member {
            return Err(Error::NotDifferentialClosed(format!("boundary of {} is outside", g.display(cx))));
        }
    }
    let basis = cx.basis();
    let jobs: Vec<(BasisIndex, usize)> =
        basis.iter().flat_map(|&e| (0..s.len()).map(move |k| (e, k))).collect();
    let failures = jobs
        .par_iter()
        .map(|&(e, k)| {
            let p = d.multiply(&d.basis_chain(e), &s.generators[k]);
            Ok((!submodule_membership(cx, &p, s)?.member).then(|| Witness {
                elements: vec![d.name(e), s.generators[k].display(cx)],
                detail: format!("product {} is outside", p.display(cx)),
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    Ok(ClosureReport { is_dg_ideal: failures.is_empty(), products_checked: jobs.len(), failures })
}

/// Row-reduced generators of `S` per degree, each with a unit coefficient
/// on its own pivot basis element and no other pivots.
struct Reduction {
    pivots: Vec<BTreeMap<usize, Chain>>,
}

impl Reduction {
    fn build(cx: &LabeledFreeComplex, s: &SubmoduleSpan) -> Result<Self> {
        let mut pivots: Vec<BTreeMap<usize, Chain>> = vec![BTreeMap::new(); cx.modules().len()];
        let mut pending: Vec<Vec<(Chain, Option<usize>)>> = vec![Vec::new(); cx.modules().len()];
        for (g, h) in s.generators.iter().zip(&s.pivot_hints) {
            if g.degree >= pending.len() {
                return Err(Error::invalid("generator outside the complex"));
            }
            pending[g.degree].push((g.clone(), h.filter(|h| h.degree == g.degree).map(|h| h.index)));
        }
        for (deg, work) in pending.into_iter().enumerate() {
            let rows = &mut pivots[deg];
            let mut queue = work;
            loop {
                let mut progress = false;
                let mut left = Vec::new();
                for (g, hint) in queue {
                    let g = reduce(&g, rows);
                    if g.is_zero() {
                        continue;
                    }
                    let unit_at = |i: usize| g.terms.get(&i).and_then(|p| p.as_nonzero_constant()).is_some();
                    let choice = hint.filter(|&h| unit_at(h)).or_else(|| g.terms.keys().copied().find(|&i| unit_at(i)));
                    match choice {
                        None => left.push((g, hint)),
                        Some(p) => {
                            let c = g.terms[&p].as_nonzero_constant().unwrap().clone();
                            let g = g.scale_coeff(&(Coeff::one() / c));
                            for r in rows.values_mut() {
                                if let Some(q) = r.terms.get(&p).cloned() {
                                    r.add_scaled(&g, &q.neg());
                                }
                            }
                            rows.insert(p, g);
                            progress = true;
                        }
                    }
                }
                queue = left;
                if queue.is_empty() {
                    break;
                }
                if !progress {
                    let g = &queue[0].0;
                    return Err(Error::QuotientNotFree(format!(
                        "generator {} has no unit pivot in degree {deg}",
                        g.display(cx)
                    )));
                }
            }
        }
        Ok(Reduction { pivots })
    }

    /// Image in the quotient, written on the non-pivot basis.
    fn project(&self, c: &Chain) -> Chain {
        match self.pivots.get(c.degree) {
            Some(rows) => reduce(c, rows),
            None => c.clone(),
        }
    }
}

fn reduce(c: &Chain, rows: &BTreeMap<usize, Chain>) -> Chain {
    let mut out = c.clone();
    for (p, r) in rows {
        if let Some(q) = out.terms.get(p).cloned() {
            out.add_scaled(r, &q.neg());
        }
    }
    out
}

/// `F/S` for a dg ideal `S` whose generators reduce to unit pivots. The
/// quotient keeps the non-pivot basis elements with their labels.
pub fn quotient_dg(d: &DgStructure, s: &SubmoduleSpan) -> Result<DgStructure> {
    let closure = dg_ideal_closure(d, s)?;
    if !closure.is_dg_ideal {
        return Err(Error::NotDgIdeal(
            closure.failures.first().map(|w| w.detail.clone()).unwrap_or_default(),
        ));
    }
    quotient_unchecked(d, s)
}

/// As [`quotient_dg`] but trusts the caller that `S` is a dg ideal.
pub fn quotient_unchecked(d: &DgStructure, s: &SubmoduleSpan) -> Result<DgStructure> {
    let cx = &d.complex;
    let red = Reduction::build(cx, s)?;
    // survivors and their new positions
    let keep: Vec<Vec<usize>> = cx
        .modules()
        .iter()
        .enumerate()
        .map(|(deg, m)| (0..m.len()).filter(|i| !red.pivots[deg].contains_key(i)).collect())
        .collect();
    let pos: Vec<BTreeMap<usize, usize>> = keep
        .iter()
        .map(|k| k.iter().enumerate().map(|(new, &old)| (old, new)).collect())
        .collect();
    let renumber = |c: &Chain| -> Chain {
        let mut out = Chain::zero(c.degree);
        for (i, p) in &c.terms {
            out.add_poly(pos[c.degree][i], p);
        }
        out
    };
    let modules: Vec<Vec<_>> = keep
        .iter()
        .enumerate()
        .map(|(deg, k)| k.iter().map(|&i| cx.module(deg)[i].clone()).collect())
        .collect();
    let mut diffs = Vec::new();
    for deg in 1..modules.len() {
        let mut m = SparseMatrix::zeros(modules[deg - 1].len(), modules[deg].len());
        for (col, &old) in keep[deg].iter().enumerate() {
            let img = red.project(&cx.apply_diff(&Chain::basis(BasisIndex { degree: deg, index: old }, cx.vars().len())));
            for (r, p) in &renumber(&img).terms {
                m.set(*r, col, p.clone());
            }
        }
        diffs.push(m);
    }
    let qcx = LabeledFreeComplex::new(cx.vars().clone(), modules, diffs)?;
    if red.pivots[d.unit.degree].contains_key(&d.unit.index) {
        return Err(Error::QuotientNotFree("the unit lies in the submodule".into()));
    }
    let unit = BasisIndex { degree: d.unit.degree, index: pos[d.unit.degree][&d.unit.index] };
    DgStructure::from_fn(qcx, unit, |a, b| {
        let oa = BasisIndex { degree: a.degree, index: keep[a.degree][a.index] };
        let ob = BasisIndex { degree: b.degree, index: keep[b.degree][b.index] };
        let p = d.product(oa, ob);
        if p.is_zero() {
            return Ok(Chain::zero(a.degree + b.degree));
        }
        Ok(renumber(&red.project(&p)))
    })
}
