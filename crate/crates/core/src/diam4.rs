//! Minimal DG resolutions for trees of diameter at most four, built as a
//! mapping cone over two Taylor resolutions.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::combin::{graph_diameter, FamilySpec, Graph};
use crate::complex::{
    desuspend_positive, mapping_cone, strand_homology, tensor_product, twist, BasisIndex, Chain, ChainMap, ConePart,
    LabeledFreeComplex, SparseMatrix, Subset, Tag, TreePart,
};
use crate::dg::DgStructure;
use crate::error::{Error, Result};
use crate::poly::{coeff, Monomial, MonomialIdeal, Polynomial, VarSet};
use crate::taylor::{subset_lcm, taylor_dg, taylor_product, taylor_resolution};

/// A tree written as a center `z`, spokes `x_i` adjacent to it and leaves
/// `y_{i,j}` hanging off spoke `i`. Indices refer to `vars`.
#[derive(Clone, Debug)]
pub struct StarDecomposition {
    vars: VarSet,
    center: usize,
    spokes: Vec<usize>,
    leaves: Vec<Vec<usize>>,
    spoke_ideal: MonomialIdeal,
    leaf_ideal: MonomialIdeal,
    /// Spoke position of each leaf-edge generator.
    spoke_of: Vec<usize>,
}

/// Names of the pieces of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSummary {
    pub center: String,
    pub spokes: Vec<String>,
    pub leaves: Vec<Vec<String>>,
}

impl StarDecomposition {
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn spokes(&self) -> &[usize] {
        &self.spokes
    }

    pub fn leaves(&self) -> &[Vec<usize>] {
        &self.leaves
    }

    /// Leaf counts per spoke.
    pub fn arms(&self) -> Vec<usize> {
        self.leaves.iter().map(Vec::len).collect()
    }

    /// Total number of leaves.
    pub fn leaf_count(&self) -> usize {
        self.leaves.iter().map(Vec::len).sum()
    }

    pub fn family(&self) -> FamilySpec {
        FamilySpec::Diam4 { arms: self.arms() }
    }

    /// `(z x_1, ..., z x_n)` in spoke order.
    pub fn spoke_ideal(&self) -> &MonomialIdeal {
        &self.spoke_ideal
    }

    /// `(x_i y_{i,j})` ordered by spoke, then leaf.
    pub fn leaf_ideal(&self) -> &MonomialIdeal {
        &self.leaf_ideal
    }

    /// The edge ideal: spoke generators followed by leaf generators.
    pub fn edge_ideal(&self) -> MonomialIdeal {
        let gens = self.spoke_ideal.generators().iter().chain(self.leaf_ideal.generators()).cloned().collect();
        MonomialIdeal::from_generators(self.vars.clone(), gens).expect("edges are distinct")
    }

    pub fn center_monomial(&self) -> Monomial {
        Monomial::var(self.vars.len(), self.center)
    }

    pub fn summary(&self) -> StarSummary {
        let name = |v: usize| self.vars.name(v).to_string();
        StarSummary {
            center: name(self.center),
            spokes: self.spokes.iter().map(|&v| name(v)).collect(),
            leaves: self.leaves.iter().map(|l| l.iter().map(|&v| name(v)).collect()).collect(),
        }
    }

    /// `Φ(g_W) = y_W f_{W_z}` as `(y_W, W_z)`; None when `W_z` repeats a
    /// spoke. The empty set maps to `(z, ∅)`.
    pub fn zification(&self, w: Subset) -> Option<(Monomial, Subset)> {
        if w.is_empty() {
            return Some((self.center_monomial(), Subset::EMPTY));
        }
        let mut wz = Subset::EMPTY;
        let mut y = self.vars.one();
        for k in w.iter() {
            let i = self.spoke_of[k];
            if wz.contains(i) {
                return None;
            }
            wz = wz.insert(i);
            let leaf_gen = &self.leaf_ideal.generators()[k];
            y = &y * &leaf_gen.divide(&Monomial::var(self.vars.len(), self.spokes[i])).expect("spoke divides its edge");
        }
        Some((y, wz))
    }

    /// The multiset `W_z` as spoke positions, repeats kept.
    pub fn zify_multiset(&self, w: Subset) -> Vec<usize> {
        w.iter().map(|k| self.spoke_of[k]).collect()
    }
}

/// Finds a center within distance two of every vertex and reads off spokes
/// and leaves. Ties between centers go to the lowest vertex index.
pub fn star_decompose(g: &Graph) -> Result<StarDecomposition> {
    if !g.is_tree() {
        return Err(Error::invalid("graph is not a tree"));
    }
    if g.num_vertices() < 2 {
        return Err(Error::invalid("need at least one edge"));
    }
    let d = graph_diameter(g);
    if d > 4 {
        return Err(Error::invalid(format!("tree has diameter {d}, expected at most 4")));
    }
    let ecc = |v: usize| g.bfs(v).into_iter().map(|x| x.unwrap_or(0)).max().unwrap_or(0);
    let center = (0..g.num_vertices()).min_by_key(|&v| (ecc(v), v)).unwrap();
    let vars = VarSet::new(g.vertices().iter().cloned())?;
    let n = vars.len();
    let mut spokes = g.neighbors(center);
    spokes.sort_unstable();
    let leaves: Vec<Vec<usize>> = spokes
        .iter()
        .map(|&x| {
            let mut l: Vec<usize> = g.neighbors(x).into_iter().filter(|&y| y != center).collect();
            l.sort_unstable();
            l
        })
        .collect();
    let z = Monomial::var(n, center);
    let spoke_gens = spokes.iter().map(|&x| &z * &Monomial::var(n, x)).collect();
    let mut leaf_gens = Vec::new();
    let mut spoke_of = Vec::new();
    for (i, (&x, ls)) in spokes.iter().zip(&leaves).enumerate() {
        for &y in ls {
            leaf_gens.push(&Monomial::var(n, x) * &Monomial::var(n, y));
            spoke_of.push(i);
        }
    }
    Ok(StarDecomposition {
        spoke_ideal: MonomialIdeal::from_generators(vars.clone(), spoke_gens)?,
        leaf_ideal: MonomialIdeal::from_generators(vars.clone(), leaf_gens)?,
        vars,
        center,
        spokes,
        leaves,
        spoke_of,
    })
}

fn subset_of(l: &Tag) -> Subset {
    match l {
        Tag::Subset(s) => *s,
        _ => unreachable!("Taylor labels are subsets"),
    }
}

fn position_map(cx: &LabeledFreeComplex) -> HashMap<Subset, usize> {
    cx.modules()
        .iter()
        .flat_map(|m| m.iter().enumerate().map(|(i, l)| (subset_of(&l.tag), i)))
        .collect()
}

/// The matrices of `Φ: G -> F` between the two Taylor resolutions.
fn zification_maps(dec: &StarDecomposition, f: &LabeledFreeComplex, g: &LabeledFreeComplex) -> Vec<SparseMatrix> {
    let fpos = position_map(f);
    (0..g.modules().len())
        .map(|k| {
            let mut m = SparseMatrix::zeros(f.rank(k), g.rank(k));
            for (c, l) in g.module(k).iter().enumerate() {
                if let Some((y, wz)) = dec.zification(subset_of(&l.tag)) {
                    m.set(fpos[&wz], c, Polynomial::monomial(y));
                }
            }
            m
        })
        .collect()
}

/// `Φ` as a verified chain map from the Taylor resolution of the leaf ideal
/// to that of the spoke ideal.
pub fn zification_map(dec: &StarDecomposition) -> Result<ChainMap> {
    let f = taylor_resolution(dec.spoke_ideal(), None)?;
    let g = taylor_resolution(dec.leaf_ideal(), None)?;
    let maps = zification_maps(dec, &f, &g);
    ChainMap::new(g, f, maps)
}

fn scalar_maps(cx: &LabeledFreeComplex, m: &Monomial) -> Vec<SparseMatrix> {
    (0..cx.modules().len())
        .map(|k| {
            let mut s = SparseMatrix::zeros(cx.rank(k), cx.rank(k));
            for i in 0..cx.rank(k) {
                s.set(i, i, Polynomial::monomial(m.clone()));
            }
            s
        })
        .collect()
}

/// `Cone(μ^z)` for multiplication by `z` on the desuspended positive part
/// of the leaf ideal's Taylor resolution; resolves `J / zJ`.
pub fn build_g_prime(dec: &StarDecomposition) -> Result<LabeledFreeComplex> {
    let g = taylor_resolution(dec.leaf_ideal(), None)?;
    Ok(mapping_cone(&multiplication_by_center(dec, &g)?))
}

fn multiplication_by_center(dec: &StarDecomposition, g: &LabeledFreeComplex) -> Result<ChainMap> {
    let z = dec.center_monomial();
    let shifted = desuspend_positive(g);
    ChainMap::new(twist(&shifted, &z), shifted.clone(), scalar_maps(&shifted, &z))
}

/// The cone resolution with its product and the pieces it was built from.
#[derive(Clone, Debug)]
pub struct ConeResolution {
    pub decomposition: StarDecomposition,
    /// Taylor resolution of the spoke ideal.
    pub spokes: LabeledFreeComplex,
    /// Taylor resolution of the leaf ideal.
    pub leaves: LabeledFreeComplex,
    pub dg: DgStructure,
}

impl ConeResolution {
    pub fn complex(&self) -> &LabeledFreeComplex {
        self.dg.complex()
    }

    pub fn position(&self, part: TreePart, s: Subset) -> Option<BasisIndex> {
        self.complex().find(&Tag::Tree(part, s))
    }
}

fn retag(t: &Tag) -> Tag {
    match t {
        Tag::Cone(ConePart::Target, inner) => Tag::Tree(TreePart::F, subset_of(inner)),
        Tag::Cone(ConePart::Source, inner) => match inner.as_ref() {
            Tag::Cone(ConePart::Target, s) => Tag::Tree(TreePart::G, subset_of(s)),
            Tag::Cone(ConePart::Source, s) => Tag::Tree(TreePart::Shift, subset_of(s)),
            _ => unreachable!("the source is itself a cone"),
        },
        _ => unreachable!("cone labels carry a part"),
    }
}

/// `Cone(Ψ)` with `Ψ_0 = (∂_1^G 0)` and `Ψ_i = (0 Φ_i)`, plus the product
/// defined case by case on F, G and shifted G basis elements.
pub fn build_cone_resolution(g: &Graph) -> Result<ConeResolution> {
    cone_from_decomposition(star_decompose(g)?)
}

pub fn cone_from_decomposition(dec: StarDecomposition) -> Result<ConeResolution> {
    let f = taylor_resolution(dec.spoke_ideal(), None)?;
    let g = taylor_resolution(dec.leaf_ideal(), None)?;
    let g_prime = mapping_cone(&multiplication_by_center(&dec, &g)?);
    let phi = zification_maps(&dec, &f, &g);
    let mut psi = Vec::new();
    for i in 0..g_prime.modules().len() {
        let mut m = SparseMatrix::zeros(f.rank(i), g_prime.rank(i));
        let top = g.rank(i + 1);
        if i == 0 {
            if let Some(d) = g.diff(1) {
                for (r, c, p) in d.entries() {
                    m.set(r, c, p.clone());
                }
            }
        } else {
            for (r, c, p) in phi[i].entries() {
                m.set(r, top + c, p.clone());
            }
        }
        psi.push(m);
    }
    let psi = ChainMap::new(g_prime, f.clone(), psi)?;
    let cx = mapping_cone(&psi).relabel(|_, l| retag(&l.tag));
    let dg = tree_product(&dec, cx)?;
    Ok(ConeResolution { decomposition: dec, spokes: f, leaves: g, dg })
}

/// Pieces of a product before they are placed in the cone basis.
struct Term {
    part: TreePart,
    sign: i64,
    coef: Monomial,
    subset: Subset,
}

fn divide_center(dec: &StarDecomposition, m: Monomial) -> Result<Monomial> {
    m.divide(&dec.center_monomial())
        .map_err(|_| Error::Internal("a product over z is not divisible by z".into()))
}

/// `(1/z) f_V Φ(g_W)` up to the ordering of the two factors.
fn f_times_phi(dec: &StarDecomposition, v: Subset, w: Subset, phi_first: bool) -> Result<Option<Term>> {
    let Some((y, wz)) = dec.zification(w) else { return Ok(None) };
    let prod = if phi_first {
        taylor_product(dec.spoke_ideal(), wz, v)
    } else {
        taylor_product(dec.spoke_ideal(), v, wz)
    };
    let Some((s, m, u)) = prod else { return Ok(None) };
    Ok(Some(Term { part: TreePart::F, sign: s, coef: divide_center(dec, &y * &m)?, subset: u }))
}

/// `ω_{f_V}(g_W)` for a basis element `f_V` of positive degree.
fn omega(dec: &StarDecomposition, v: Subset, w: Subset) -> Option<Term> {
    if v.len() != 1 {
        return None;
    }
    let i = v.iter().next().unwrap();
    let x = Monomial::var(dec.vars.len(), dec.spokes[i]);
    Some(Term { part: TreePart::Shift, sign: -1, coef: x, subset: w })
}

fn leaf_product(dec: &StarDecomposition, part: TreePart, sign: i64, v: Subset, w: Subset) -> Option<Term> {
    taylor_product(dec.leaf_ideal(), v, w).map(|(s, m, u)| Term { part, sign: sign * s, coef: m, subset: u })
}

fn parity(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The ten product rules on basis labels.
fn tree_terms(dec: &StarDecomposition, a: (TreePart, Subset), b: (TreePart, Subset)) -> Result<Vec<Term>> {
    use TreePart::*;
    let unit = (F, Subset::EMPTY);
    if a == unit {
        return Ok(vec![Term { part: b.0, sign: 1, coef: dec.vars.one(), subset: b.1 }]);
    }
    if b == unit {
        return Ok(vec![Term { part: a.0, sign: 1, coef: dec.vars.one(), subset: a.1 }]);
    }
    let ((pa, v), (pb, w)) = (a, b);
    let mut out = Vec::new();
    match (pa, pb) {
        (F, F) => {
            if let Some((s, m, u)) = taylor_product(dec.spoke_ideal(), v, w) {
                out.push(Term { part: F, sign: s, coef: m, subset: u });
            }
        }
        (F, G) => {
            out.extend(f_times_phi(dec, v, w, false)?);
            out.extend(omega(dec, v, w));
        }
        (G, F) => {
            out.extend(f_times_phi(dec, w, v, true)?);
            out.extend(omega(dec, w, v).map(|t| Term { sign: t.sign * parity(v.len()), ..t }));
        }
        (G, G) => out.extend(leaf_product(dec, G, 1, v, w)),
        (G, Shift) => out.extend(leaf_product(dec, Shift, parity(v.len()), v, w)),
        (Shift, G) => out.extend(leaf_product(dec, Shift, 1, v, w)),
        (F, Shift) | (Shift, F) | (Shift, Shift) => {}
    }
    Ok(out)
}

fn tree_product(dec: &StarDecomposition, cx: LabeledFreeComplex) -> Result<DgStructure> {
    let pos: HashMap<(TreePart, Subset), BasisIndex> = cx
        .basis()
        .into_iter()
        .map(|b| match cx.label(b).tag {
            Tag::Tree(p, s) => ((p, s), b),
            _ => unreachable!("cone labels are retagged"),
        })
        .collect();
    let key = |b: BasisIndex, cx: &LabeledFreeComplex| match cx.label(b).tag {
        Tag::Tree(p, s) => (p, s),
        _ => unreachable!(),
    };
    let keys: Vec<Vec<(TreePart, Subset)>> = cx
        .modules()
        .iter()
        .enumerate()
        .map(|(d, m)| (0..m.len()).map(|i| key(BasisIndex { degree: d, index: i }, &cx)).collect())
        .collect();
    let unit = pos[&(TreePart::F, Subset::EMPTY)];
    let dec = dec.clone();
    DgStructure::from_fn(cx, unit, move |a, b| {
        let mut c = Chain::zero(a.degree + b.degree);
        for t in tree_terms(&dec, keys[a.degree][a.index], keys[b.degree][b.index])? {
            let at = pos
                .get(&(t.part, t.subset))
                .ok_or_else(|| Error::Internal(format!("product lands outside the cone at {:?} {}", t.part, t.subset)))?;
            if at.degree != c.degree {
                return Err(Error::Internal("product has the wrong homological degree".into()));
            }
            c.add_poly(at.index, &Polynomial::term(coeff(t.sign), t.coef));
        }
        Ok(c)
    })
}

/// Total Betti numbers `β_0 = 1`, `β_1 = ℓ + n`, `β_i = C(ℓ+1, i) + C(n, i)`,
/// with the projective dimension `max(ℓ + 1, n)`.
pub fn diam4_betti(arms: &[usize]) -> Result<(Vec<usize>, usize)> {
    if arms.is_empty() {
        return Err(Error::invalid("need at least one spoke"));
    }
    let n = arms.len();
    let l: usize = arms.iter().sum();
    let pd = (l + 1).max(n);
    let choose = |a: usize, k: usize| -> usize {
        if k > a {
            return 0;
        }
        (0..k).fold(1usize, |acc, j| acc * (a - j) / (j + 1))
    };
    let mut betti = vec![1, l + n];
    betti.extend((2..=pd).map(|i| choose(l + 1, i) + choose(n, i)));
    Ok((betti, pd))
}

/// Outcome of one identity checked over all basis pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn nonempty_subsets(t: usize) -> Vec<Subset> {
    (1..(1u64 << t)).map(Subset).collect()
}

/// `z Φ(g_V g_W) = Φ(g_V) Φ(g_W)` for all nonempty `V, W`.
pub fn check_zification_multiplicative(dec: &StarDecomposition) -> IdentityCheck {
    let z = dec.center_monomial();
    let all = nonempty_subsets(dec.leaf_ideal().len());
    let mut failures = Vec::new();
    let mut checked = 0;
    for &v in &all {
        for &w in &all {
            checked += 1;
            let lhs = taylor_product(dec.leaf_ideal(), v, w).and_then(|(s, m, u)| {
                dec.zification(u).map(|(y, uz)| (s, &(&z * &m) * &y, uz))
            });
            let rhs = match (dec.zification(v), dec.zification(w)) {
                (Some((yv, vz)), Some((yw, wz))) => {
                    taylor_product(dec.spoke_ideal(), vz, wz).map(|(s, m, u)| (s, &(&yv * &yw) * &m, u))
                }
                _ => None,
            };
            if lhs != rhs {
                failures.push(format!("V={v} W={w}: {lhs:?} vs {rhs:?}"));
            }
        }
    }
    IdentityCheck { identity: "z*phi(gg)=phi(g)phi(g)".into(), checked, failures }
}

/// `σ(V, W) = σ(V_z, W_z)` when both z-ifications are repeat-free and disjoint.
pub fn check_sign_transfer(dec: &StarDecomposition) -> IdentityCheck {
    let all = nonempty_subsets(dec.leaf_ideal().len());
    let mut failures = Vec::new();
    let mut checked = 0;
    for &v in &all {
        for &w in &all {
            let (Some((_, vz)), Some((_, wz))) = (dec.zification(v), dec.zification(w)) else { continue };
            if vz.intersects(wz) {
                continue;
            }
            checked += 1;
            if v.inversions(w) != vz.inversions(wz) {
                failures.push(format!("V={v} W={w}"));
            }
        }
    }
    IdentityCheck { identity: "sigma(V,W)=sigma(Vz,Wz)".into(), checked, failures }
}

/// `(∂f, 0, 0)·(0, g, 0)` equals `((1/z) ∂f Φ(g), 0, 0)` for `|f| > 1` and
/// `(0, ∂f g, 0)` for `|f| = 1`. The right side is computed in the Taylor
/// algebra of the spoke ideal.
pub fn check_boundary_product(cone: &ConeResolution) -> Result<IdentityCheck> {
    let dec = &cone.decomposition;
    let cx = cone.complex();
    let nv = dec.vars.len();
    let f_dg = taylor_dg(dec.spoke_ideal(), None)?;
    let f_pos = position_map(&cone.spokes);
    let z = dec.center_monomial();
    let mut failures = Vec::new();
    let mut checked = 0;
    let spoke_sets: Vec<Subset> = nonempty_subsets(dec.spoke_ideal().len());
    for &v in &spoke_sets {
        let fb = cone.position(TreePart::F, v).expect("every spoke subset is in the cone");
        let boundary = cx.apply_diff(&Chain::basis(fb, nv));
        for w in nonempty_subsets(dec.leaf_ideal().len()) {
            checked += 1;
            let gb = cone.position(TreePart::G, w).expect("every leaf subset is in the cone");
            let lhs = cone.dg.multiply(&boundary, &Chain::basis(gb, nv));
            let mut rhs = Chain::zero(lhs.degree);
            if v.len() == 1 {
                let m = subset_lcm(dec.spoke_ideal(), v);
                rhs.add_poly(gb.index, &Polynomial::monomial(m));
            } else if let Some((y, wz)) = dec.zification(w) {
                let fdeg = v.len() - 1;
                let mut df = Chain::zero(fdeg);
                for (&i, p) in &boundary.terms {
                    let Tag::Tree(TreePart::F, s) = cx.label(BasisIndex { degree: fdeg, index: i }).tag else {
                        continue;
                    };
                    df.add_poly(f_pos[&s], p);
                }
                let phi = Chain::term(
                    BasisIndex { degree: wz.len(), index: f_pos[&wz] },
                    Polynomial::monomial(y),
                );
                let prod = f_dg.multiply(&df, &phi);
                for (&i, p) in &prod.terms {
                    let s = subset_of(&cone.spokes.module(prod.degree)[i].tag);
                    let at = cone.position(TreePart::F, s).expect("spoke subsets are in the cone");
                    rhs.add_poly(at.index, &p.divide_monomial(&z)?);
                }
            }
            if lhs != rhs {
                failures.push(format!("f{v} g{w}: {} vs {}", lhs.display(cx), rhs.display(cx)));
            }
        }
    }
    Ok(IdentityCheck { identity: "boundary-product".into(), checked, failures })
}

/// `H_1` of the tensor product of the two Taylor resolutions in each strand
/// `z x_i y_{i,j}`. Nonzero entries show the tensor product is not a resolution.
pub fn tensor_defect(dec: &StarDecomposition) -> Result<Vec<(String, usize)>> {
    let f = taylor_resolution(dec.spoke_ideal(), None)?;
    let g = taylor_resolution(dec.leaf_ideal(), None)?;
    let t = tensor_product(&f, &g)?;
    let z = dec.center_monomial();
    let mut out = Vec::new();
    let strands: BTreeSet<Monomial> = dec.leaf_ideal().generators().iter().map(|m| &z * m).collect();
    for b in strands {
        let h = strand_homology(&t, &b);
        out.push((b.display(&dec.vars).to_string(), h.get(1).copied().unwrap_or(0)));
    }
    Ok(out)
}
