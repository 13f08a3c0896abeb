//! Pruning a resolution by setting variables to zero, on complexes and on
//! Taylor-quotient DG algebras.

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, Label, LabeledFreeComplex, SparseMatrix, Tag};
use crate::dg::{quotient_dg, DgStructure, SubmoduleSpan};
use crate::error::{Error, Result};
use crate::poly::{MonomialIdeal, VarSet};

/// Variable indices for the given names.
pub fn variable_indices<S: AsRef<str>>(vars: &VarSet, names: &[S]) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = names
        .iter()
        .map(|n| {
            vars.index_of(n.as_ref())
                .ok_or_else(|| Error::Parse(format!("unknown variable {}", n.as_ref())))
        })
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Drops every generator divisible by a variable of `z` and removes those
/// variables from the ring.
pub fn prune_ideal(ideal: &MonomialIdeal, z: &[usize]) -> Result<MonomialIdeal> {
    let gens = ideal
        .generators()
        .iter()
        .filter(|g| !z.iter().any(|&v| g.involves(v)))
        .map(|g| g.without(z))
        .collect::<Result<Vec<_>>>()?;
    MonomialIdeal::from_generators(ideal.vars().without(z), gens)
}

/// Basis elements removed in one pass of the loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneStep {
    pub degree: usize,
    /// Column positions in the differential as it stood at this pass.
    pub deleted_columns: Vec<usize>,
    pub deleted_labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneTrace {
    pub variables: Vec<String>,
    pub steps: Vec<PruneStep>,
}

#[derive(Clone, Debug)]
pub struct PruneResult {
    /// The pruned complex over the original variables, with `z` set to zero.
    pub complex: LabeledFreeComplex,
    pub trace: PruneTrace,
    /// The complex after each pass, first pass first.
    pub stages: Vec<LabeledFreeComplex>,
}

/// For `i = 1, 2, ...`: set `z` to zero in `A_i`, then delete its zero
/// columns along with the matching basis of `F_i` and rows of `A_{i+1}`.
pub fn prune_complex(f: &LabeledFreeComplex, z: &[usize]) -> PruneResult {
    let vars = f.vars().clone();
    let mut modules: Vec<Vec<Label>> = f.modules().to_vec();
    let mut diffs: Vec<SparseMatrix> = f.diffs().to_vec();
    let mut steps = Vec::new();
    let mut stages = Vec::new();
    for i in 1..modules.len() {
        let a = diffs[i - 1].map_entries(|p| p.kill_vars(z));
        let (zero, live): (Vec<usize>, Vec<usize>) = (0..a.ncols()).partition(|&c| a.column(c).is_empty());
        let rows: Vec<usize> = (0..a.nrows()).collect();
        diffs[i - 1] = a.select(&rows, &live);
        if i < diffs.len() {
            let next = &diffs[i];
            let cols: Vec<usize> = (0..next.ncols()).collect();
            diffs[i] = next.select(&live, &cols);
        }
        steps.push(PruneStep {
            degree: i,
            deleted_labels: zero.iter().map(|&c| modules[i][c].tag.to_string()).collect(),
            deleted_columns: zero,
        });
        modules[i] = live.iter().map(|&c| modules[i][c].clone()).collect();
        stages.push(
            LabeledFreeComplex::new(vars.clone(), modules.clone(), diffs.clone()).expect("pruning keeps shapes"),
        );
    }
    let complex = stages.last().cloned().unwrap_or_else(|| f.clone());
    let trace = PruneTrace {
        variables: z.iter().map(|&v| vars.name(v).to_string()).collect(),
        steps,
    };
    PruneResult { complex, trace, stages }
}

/// Rewrites a complex over the ring without the variables `z`. Fails when a
/// label or entry still involves one of them.
pub fn restrict_vars(cx: &LabeledFreeComplex, z: &[usize]) -> Result<LabeledFreeComplex> {
    let vars = cx.vars().without(z);
    let modules = cx
        .modules()
        .iter()
        .map(|m| {
            m.iter()
                .map(|l| Ok(Label { tag: l.tag.clone(), multidegree: l.multidegree.without(z)? }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let diffs = cx
        .diffs()
        .iter()
        .map(|d| {
            let mut out = SparseMatrix::zeros(d.nrows(), d.ncols());
            for (r, c, p) in d.entries() {
                out.set(r, c, p.map_monomials(|m| m.without(z))?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledFreeComplex::new(vars, modules, diffs)
}

fn kill_chain(c: &Chain, z: &[usize]) -> Chain {
    let mut out = Chain::zero(c.degree);
    for (&i, p) in &c.terms {
        out.add_poly(i, &p.kill_vars(z));
    }
    out
}

/// The same DG algebra with the variables `z` set to zero.
pub fn substitute_zero(d: &DgStructure, z: &[usize]) -> Result<DgStructure> {
    let cx = d.complex();
    let diffs = cx.diffs().iter().map(|m| m.map_entries(|p| p.kill_vars(z))).collect();
    let killed = LabeledFreeComplex::new(cx.vars().clone(), cx.modules().to_vec(), diffs)?;
    DgStructure::from_fn(killed, d.unit(), |a, b| Ok(kill_chain(&d.product(a, b), z)))
}

/// Span of the Taylor basis elements `e_V` (and their boundaries) where `V`
/// contains a generator divisible by a variable of `z`.
pub fn pruned_generators_span(t: &LabeledFreeComplex, ideal: &MonomialIdeal, z: &[usize]) -> Result<SubmoduleSpan> {
    let hit: Vec<bool> = ideal
        .generators()
        .iter()
        .map(|g| z.iter().any(|&v| g.involves(v)))
        .collect();
    let mut span = SubmoduleSpan::new();
    for b in t.basis() {
        let Tag::Subset(s) = t.label(b).tag else {
            return Err(Error::invalid("expected a Taylor complex with subset labels"));
        };
        if s.iter().any(|i| hit[i]) {
            let e = Chain::basis(b, t.vars().len());
            span.push(t.apply_diff(&e), None);
            span.push(e, Some(b));
        }
    }
    Ok(span)
}

/// Prunes the quotient `T/J` of a Taylor DG algebra: sets `z` to zero,
/// then divides by the span of the pruned generators plus `J`.
pub fn prune_dg(taylor: &DgStructure, j: &SubmoduleSpan, ideal: &MonomialIdeal, z: &[usize]) -> Result<DgStructure> {
    let killed = substitute_zero(taylor, z)?;
    let mut span = pruned_generators_span(killed.complex(), ideal, z)?;
    let mut rest = SubmoduleSpan::new();
    for (g, h) in j.generators.iter().zip(&j.pivot_hints) {
        rest.push(kill_chain(g, z), *h);
    }
    span.extend(&rest);
    quotient_dg(&killed, &span).map_err(|e| match e {
        Error::NotDgIdeal(m) | Error::NotDifferentialClosed(m) => {
            Error::Internal(format!("pruned ideal is not a dg ideal: {m}"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::{build_family, edge_ideal};
    use crate::complex::{is_minimal, is_resolution_of, verify_complex};
    use crate::dg::dg_check;
    use crate::morse::{lyubeznik_matching, lyubeznik_resolution, matching_submodule};
    use crate::taylor::{taylor_dg, taylor_resolution};

    fn ideal(s: &str) -> MonomialIdeal {
        edge_ideal(&build_family(&s.parse().unwrap()).unwrap())
    }

    #[test]
    fn ideal_pruning() {
        let i = ideal("L(1,1,1)");
        let y1 = variable_indices(i.vars(), &["y1"]).unwrap();
        let p = prune_ideal(&i, &y1).unwrap();
        let names: Vec<String> = p.generators().iter().map(|g| g.display(p.vars()).to_string()).collect();
        assert_eq!(names, vec!["x*y", "x*z1", "y*z1", "x*x1"]);
        assert_eq!(p.vars().len(), 4);
        assert_eq!(prune_ideal(&i, &[]).unwrap().generators(), i.generators());
        let c7 = ideal("C7");
        let p = prune_ideal(&c7, &[0]).unwrap();
        assert_eq!(p.len(), 5);
        assert!(variable_indices(i.vars(), &["w"]).is_err());
    }

    #[test]
    fn lyubeznik_pruning_is_resolution() {
        let i = ideal("L(1,1,1)");
        let z = variable_indices(i.vars(), &["y1"]).unwrap();
        let f = lyubeznik_resolution(&i, None).unwrap();
        let r = prune_complex(&f, &z);
        assert_eq!(r.complex.ranks(), vec![1, 4, 4, 1]);
        assert!(verify_complex(&r.complex).passed);
        assert!(is_minimal(&r.complex));
        let pruned = restrict_vars(&r.complex, &z).unwrap();
        assert!(is_resolution_of(&pruned, &prune_ideal(&i, &z).unwrap()).unwrap());
        assert_eq!(prune_complex(&f, &[]).complex, f);
    }

    #[test]
    fn taylor_pruning_on_cycle() {
        let i = ideal("C6");
        let t = taylor_resolution(&i, None).unwrap();
        let r = prune_complex(&t, &[0]);
        let pruned = restrict_vars(&r.complex, &[0]).unwrap();
        assert!(is_resolution_of(&pruned, &prune_ideal(&i, &[0]).unwrap()).unwrap());
        // exactly the subsets meeting one of the two edges at the vertex go
        let deleted: usize = r.trace.steps.iter().map(|s| s.deleted_columns.len()).sum();
        assert_eq!(deleted, (1 << 6) - (1 << 4));
    }

    #[test]
    fn dg_pruning() {
        let i = ideal("L(1,1,1)");
        let z = variable_indices(i.vars(), &["y1"]).unwrap();
        let t = taylor_dg(&i, None).unwrap();
        let m = lyubeznik_matching(&i, None).unwrap();
        let j = matching_submodule(t.complex(), &m).unwrap();
        let p = prune_dg(&t, &j, &i, &z).unwrap();
        assert_eq!(p.complex().ranks(), vec![1, 4, 4, 1]);
        assert!(is_minimal(p.complex()));
        assert!(dg_check(&p).passed);
        let pruned = restrict_vars(p.complex(), &z).unwrap();
        assert!(is_resolution_of(&pruned, &prune_ideal(&i, &z).unwrap()).unwrap());
    }
}
