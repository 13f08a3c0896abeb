//! The Taylor resolution on subsets of generators and its exterior-style product.

use std::collections::HashMap;

use itertools::Itertools;

use crate::complex::{tor_betti, BasisIndex, BettiTable, Chain, Label, LabeledFreeComplex, SparseMatrix, Subset, Tag};
use crate::dg::DgStructure;
use crate::error::{Error, Result};
use crate::poly::{coeff, Monomial, MonomialIdeal, Polynomial};

/// Largest generator count accepted for Taylor constructions.
pub const MAX_TAYLOR_GENERATORS: usize = 20;

/// `m_U`, the lcm of the generators indexed by `u`.
pub fn subset_lcm(ideal: &MonomialIdeal, u: Subset) -> Monomial {
    u.iter().fold(ideal.vars().one(), |acc, i| {
        acc.lcm(&ideal.generators()[i]).expect("generators share the ring")
    })
}

fn checked(ideal: &MonomialIdeal, order: Option<&[usize]>) -> Result<MonomialIdeal> {
    let ideal = match order {
        Some(o) => ideal.reordered(o)?,
        None => ideal.clone(),
    };
    if !ideal.is_minimal() {
        return Err(Error::invalid("the ideal's generators are not minimal"));
    }
    if ideal.len() > MAX_TAYLOR_GENERATORS {
        return Err(Error::TooLarge(format!(
            "{} generators exceeds the Taylor limit of {MAX_TAYLOR_GENERATORS}",
            ideal.len()
        )));
    }
    Ok(ideal)
}

/// Subsets of `0..t` of size `k` in lexicographic order.
pub fn subsets_of_size(t: usize, k: usize) -> Vec<Subset> {
    (0..t).combinations(k).map(Subset::from_indices).collect()
}

/// Position of every subset within its degree.
pub fn subset_positions(cx: &LabeledFreeComplex) -> HashMap<Subset, BasisIndex> {
    let mut out = HashMap::new();
    for (degree, m) in cx.modules().iter().enumerate() {
        for (index, l) in m.iter().enumerate() {
            if let Tag::Subset(s) = l.tag {
                out.insert(s, BasisIndex { degree, index });
            }
        }
    }
    out
}

/// The Taylor resolution of `Q/I` with generators taken in `order`
/// (position `k` holds generator `order[k]`). Subset labels index the
/// reordered generator list. Degree `i` lists `i`-subsets lexicographically.
pub fn taylor_resolution(ideal: &MonomialIdeal, order: Option<&[usize]>) -> Result<LabeledFreeComplex> {
    let ideal = checked(ideal, order)?;
    let subsets: Vec<Vec<Subset>> = (0..=ideal.len()).map(|k| subsets_of_size(ideal.len(), k)).collect();
    subcomplex_on(&ideal, &subsets)
}

/// The Taylor subcomplex spanned by the given subsets (grouped by size,
/// each group sorted). The caller guarantees closure under the differential
/// when a complex is expected.
pub fn subcomplex_on(ideal: &MonomialIdeal, subsets: &[Vec<Subset>]) -> Result<LabeledFreeComplex> {
    let modules: Vec<Vec<Label>> = subsets
        .iter()
        .map(|ss| {
            ss.iter()
                .map(|&s| Label { tag: Tag::Subset(s), multidegree: subset_lcm(ideal, s) })
                .collect()
        })
        .collect();
    let pos: Vec<HashMap<Subset, usize>> = subsets
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for k in 1..subsets.len() {
        let mut d = SparseMatrix::zeros(subsets[k - 1].len(), subsets[k].len());
        for (c, &u) in subsets[k].iter().enumerate() {
            let mu = &modules[k][c].multidegree;
            for (sigma, i) in u.iter().enumerate() {
                let face = u.remove(i);
                let Some(&r) = pos[k - 1].get(&face) else { continue };
                let m = mu.divide(&modules[k - 1][r].multidegree)?;
                let s = if sigma % 2 == 0 { 1 } else { -1 };
                d.set(r, c, Polynomial::term(coeff(s), m));
            }
        }
        diffs.push(d);
    }
    LabeledFreeComplex::new(ideal.vars().clone(), modules, diffs)
}

/// `e_V · e_W`: zero when `V ∩ W ≠ ∅`, else `(-1)^{σ(V,W)} (m_V m_W / m_{V∪W}) e_{V∪W}`.
pub fn taylor_product(ideal: &MonomialIdeal, v: Subset, w: Subset) -> Option<(i64, Monomial, Subset)> {
    if v.intersects(w) {
        return None;
    }
    let u = v.union(w);
    let num = &subset_lcm(ideal, v) * &subset_lcm(ideal, w);
    let m = num.divide(&subset_lcm(ideal, u)).expect("lcm divides the product");
    let s = if v.inversions(w) % 2 == 0 { 1 } else { -1 };
    Some((s, m, u))
}

/// Any Taylor subcomplex closed under the product gets the restricted
/// product; products leaving it are an error.
pub fn taylor_dg_on(ideal: &MonomialIdeal, cx: LabeledFreeComplex) -> Result<DgStructure> {
    let pos = subset_positions(&cx);
    let unit = *pos.get(&Subset::EMPTY).ok_or_else(|| Error::invalid("no empty subset in the basis"))?;
    let subset_of = |b: BasisIndex, cx: &LabeledFreeComplex| match cx.label(b).tag {
        Tag::Subset(s) => s,
        _ => unreachable!("Taylor labels are subsets"),
    };
    let labels: Vec<Vec<Subset>> = cx
        .modules()
        .iter()
        .enumerate()
        .map(|(d, m)| (0..m.len()).map(|i| subset_of(BasisIndex { degree: d, index: i }, &cx)).collect())
        .collect();
    let ideal = ideal.clone();
    DgStructure::from_fn(cx, unit, move |a, b| {
        let (v, w) = (labels[a.degree][a.index], labels[b.degree][b.index]);
        let mut c = Chain::zero(a.degree + b.degree);
        if let Some((s, m, u)) = taylor_product(&ideal, v, w) {
            let at = pos.get(&u).ok_or_else(|| Error::invalid(format!("product {u} leaves the subcomplex")))?;
            c.add_poly(at.index, &Polynomial::term(coeff(s), m));
        }
        Ok(c)
    })
}

/// The Taylor resolution with its product.
pub fn taylor_dg(ideal: &MonomialIdeal, order: Option<&[usize]>) -> Result<DgStructure> {
    let ideal = checked(ideal, order)?;
    let cx = taylor_resolution(&ideal, None)?;
    taylor_dg_on(&ideal, cx)
}

/// Multigraded Betti numbers of `Q/I` via `Tor(Q/I, k)` on the Taylor complex.
pub fn graded_betti(ideal: &MonomialIdeal) -> Result<BettiTable> {
    let ideal = MonomialIdeal::new(ideal.vars().clone(), ideal.generators().to_vec())?;
    if ideal.vars().len() > crate::complex::MAX_STRAND_VARS {
        return Err(Error::TooLarge(format!("{} variables", ideal.vars().len())));
    }
    Ok(tor_betti(&taylor_resolution(&ideal, None)?))
}
