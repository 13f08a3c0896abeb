//! Property and oracle tests over random and exhaustive inputs.

use dgres_core::classify::{classify_tree, lyubeznik_betti, verify_certificate, Verdict};
use dgres_core::combin::{build_family, edge_ideal, graph_diameter, FamilySpec, Graph};
use dgres_core::complex::{is_minimal, is_resolution_of, strand_homology, tor_betti, verify_complex, Chain, Subset, Tag};
use dgres_core::dg::{dg_check, dg_ideal_closure, quotient_dg, submodule_membership};
use dgres_core::diam4::build_cone_resolution;
use dgres_core::morse::{lyubeznik_matching, lyubeznik_resolution, matching_submodule, morse_reduce};
use dgres_core::prune::{prune_complex, prune_dg, prune_ideal, pruned_generators_span, restrict_vars, substitute_zero};
use dgres_core::taylor::{graded_betti, taylor_dg, taylor_resolution};
use dgres_core::{ideal_colon, minimalize, Monomial, MonomialIdeal, VarSet};
use itertools::Itertools;
use proptest::prelude::*;

fn vars(n: usize) -> VarSet {
    VarSet::new((1..=n).map(|i| format!("x{i}"))).unwrap()
}

fn squarefree_ideal(n: usize, masks: &[u64]) -> MonomialIdeal {
    let gens: Vec<Monomial> = masks.iter().map(|&m| Monomial::from_mask(n, m)).collect();
    MonomialIdeal::from_generators(vars(n), minimalize(&gens)).unwrap()
}

/// Squarefree ideals with at most `max_gens` generators on `2..=max_vars` variables.
fn ideal_strategy(max_vars: usize, max_gens: usize) -> impl Strategy<Value = MonomialIdeal> {
    (2..=max_vars).prop_flat_map(move |n| {
        prop::collection::vec(1u64..(1 << n), 1..=max_gens).prop_map(move |masks| squarefree_ideal(n, &masks))
    })
}

fn monomial_strategy(n: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u32..3, n).prop_map(Monomial::from_exponents)
}

fn random_tree(parents: &[usize]) -> Graph {
    let names = (0..=parents.len()).map(|i| format!("v{i}")).collect();
    let edges = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    Graph::new(names, edges).unwrap()
}

/// All monomials in `n` variables of total degree at most `d`.
fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..n)
        .map(|_| 0..=d)
        .multi_cartesian_product()
        .filter(|e| e.iter().sum::<u32>() <= d)
        .map(Monomial::from_exponents)
        .collect()
}

fn choose(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcm_laws(a in monomial_strategy(5), b in monomial_strategy(5), c in monomial_strategy(5)) {
        let ab = a.lcm(&b).unwrap();
        prop_assert_eq!(&ab, &b.lcm(&a).unwrap());
        prop_assert_eq!(ab.lcm(&c).unwrap(), a.lcm(&b.lcm(&c).unwrap()).unwrap());
        prop_assert_eq!(a.lcm(&a).unwrap(), a.clone());
        prop_assert_eq!(&(&ab.divide(&b).unwrap() * &b), &ab);
    }

    #[test]
    fn minimalize_idempotent_and_stable(gens in prop::collection::vec(monomial_strategy(4), 0..8)) {
        let once = minimalize(&gens);
        prop_assert_eq!(minimalize(&once), once.clone());
        // survivors keep their relative input order
        let mut pos = 0;
        for m in &once {
            let found = gens[pos..].iter().position(|g| g == m);
            prop_assert!(found.is_some());
            pos += found.unwrap() + 1;
        }
    }

    #[test]
    fn colon_matches_membership(
        n in 2usize..=6,
        i_exps in prop::collection::vec(prop::collection::vec(0u32..3, 6), 1..=6),
        j_exps in prop::collection::vec(prop::collection::vec(0u32..3, 6), 1..=3),
    ) {
        let mono = |e: &Vec<u32>| Monomial::from_exponents(e[..n].to_vec());
        let build = |es: &[Vec<u32>]| {
            let gens: Vec<Monomial> = es.iter().map(mono).collect();
            MonomialIdeal::from_generators(vars(n), minimalize(&gens)).unwrap()
        };
        let (i, j) = (build(&i_exps), build(&j_exps));
        let colon = ideal_colon(&i, &j).unwrap();
        for m in monomials_up_to(n, 6) {
            let oracle = j.generators().iter().all(|g| i.contains(&(&m * g)));
            prop_assert_eq!(colon.contains(&m), oracle, "{}", m.display(i.vars()));
        }
    }

    #[test]
    fn taylor_is_resolution_and_dg(ideal in ideal_strategy(8, 5)) {
        let t = taylor_dg(&ideal, None).unwrap();
        prop_assert!(is_resolution_of(t.complex(), &ideal).unwrap());
        let report = dg_check(&t);
        prop_assert!(report.passed, "{:?}", report.axioms);
    }

    #[test]
    fn taylor_minimal_iff_small_diameter(parents in prop::collection::vec(0usize..100, 1..7)) {
        let g = random_tree(&parents);
        let t = taylor_resolution(&edge_ideal(&g), None).unwrap();
        prop_assert_eq!(is_minimal(&t), graph_diameter(&g) <= 2);
    }

    #[test]
    fn morse_ranks_count_unmatched_subsets(ideal in ideal_strategy(6, 6)) {
        let m = lyubeznik_matching(&ideal, None).unwrap();
        let r = morse_reduce(&taylor_resolution(&ideal, None).unwrap(), &m).unwrap();
        prop_assert!(verify_complex(&r).passed);
        prop_assert!(is_resolution_of(&r, &ideal).unwrap());
        let t = ideal.len();
        let matched = m.matched_per_size(t);
        for (i, &rank) in r.ranks().iter().enumerate() {
            prop_assert_eq!(rank, choose(t, i) - matched.get(i).copied().unwrap_or(0));
        }
    }

    #[test]
    fn betti_from_any_resolution(ideal in ideal_strategy(6, 5)) {
        let direct = graded_betti(&ideal).unwrap();
        let l = lyubeznik_resolution(&ideal, None).unwrap();
        prop_assert_eq!(tor_betti(&l).totals(), direct.totals());
        if is_minimal(&l) {
            prop_assert_eq!(l.ranks(), direct.totals());
        }
    }

    #[test]
    fn non_squarefree_strands_follow_support(ideal in ideal_strategy(5, 4), exps in prop::collection::vec(0u32..3, 5)) {
        let n = ideal.vars().len();
        let t = taylor_resolution(&ideal, None).unwrap();
        let b = Monomial::from_exponents(exps[..n].to_vec());
        let support = Monomial::from_mask(n, b.support_mask());
        prop_assert_eq!(strand_homology(&t, &b), strand_homology(&t, &support));
    }

    #[test]
    fn quotient_is_dg_when_closed(ideal in ideal_strategy(6, 5)) {
        let t = taylor_dg(&ideal, None).unwrap();
        let span = matching_submodule(t.complex(), &lyubeznik_matching(&ideal, None).unwrap()).unwrap();
        if dg_ideal_closure(&t, &span).unwrap().is_dg_ideal {
            let q = quotient_dg(&t, &span).unwrap();
            prop_assert!(dg_check(&q).passed);
        }
    }

    #[test]
    fn pruned_generator_products_are_members(ideal in ideal_strategy(5, 4), zmask in 1u64..32) {
        let n = ideal.vars().len();
        let z: Vec<usize> = (0..n).filter(|i| zmask >> i & 1 == 1).collect();
        prop_assume!(!z.is_empty());
        let t = substitute_zero(&taylor_dg(&ideal, None).unwrap(), &z).unwrap();
        let span = pruned_generators_span(t.complex(), &ideal, &z).unwrap();
        prop_assert!(dg_ideal_closure(&t, &span).unwrap().is_dg_ideal);
        let hit: Vec<bool> = ideal.generators().iter().map(|g| z.iter().any(|&v| g.involves(v))).collect();
        let cx = t.complex();
        for a in cx.basis() {
            for b in cx.basis() {
                let (Tag::Subset(u), Tag::Subset(v)) = (&cx.label(a).tag, &cx.label(b).tag) else { unreachable!() };
                if u.union(*v).iter().any(|i| hit[i]) {
                    let p = t.multiply(&Chain::basis(a, n), &Chain::basis(b, n));
                    prop_assert!(submodule_membership(cx, &p, &span).unwrap().member);
                }
            }
        }
    }

    #[test]
    fn pruning_minimal_resolutions(a in 0usize..3, b in 0usize..3, c in 0usize..2, zmask in 1u64..256) {
        let ideal = edge_ideal(&build_family(&FamilySpec::Lyubeznik { a, b, c }).unwrap());
        let n = ideal.vars().len();
        let z: Vec<usize> = (0..n).filter(|i| zmask >> i & 1 == 1).collect();
        let f = lyubeznik_resolution(&ideal, None).unwrap();
        prop_assume!(is_minimal(&f));
        let pruned = prune_complex(&f, &z);
        prop_assert!(verify_complex(&pruned.complex).passed);
        let restricted = restrict_vars(&pruned.complex, &z).unwrap();
        prop_assert!(is_minimal(&restricted));
        prop_assert!(is_resolution_of(&restricted, &prune_ideal(&ideal, &z).unwrap()).unwrap());

        let t = taylor_dg(&ideal, None).unwrap();
        let j = matching_submodule(t.complex(), &lyubeznik_matching(&ideal, None).unwrap()).unwrap();
        let p = prune_dg(&t, &j, &ideal, &z).unwrap();
        prop_assert!(dg_check(&p).passed);
        prop_assert_eq!(p.complex().ranks(), restricted.ranks());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tree_verdict_depends_on_diameter(parents in prop::collection::vec(0usize..100, 1..10)) {
        let g = random_tree(&parents);
        let c = classify_tree(&g).unwrap();
        let want = if graph_diameter(&g) <= 4 { Verdict::Dg } else { Verdict::NotDg };
        prop_assert_eq!(c.verdict, want);
        let check = verify_certificate(&c).unwrap();
        prop_assert!(check.passed, "{:?}", check.checks);
    }

    #[test]
    fn cone_resolution_on_random_diameter_four_trees(parents in prop::collection::vec(0usize..100, 4..8)) {
        let g = random_tree(&parents);
        prop_assume!(graph_diameter(&g) == 4);
        let cone = build_cone_resolution(&g).unwrap();
        prop_assert!(is_resolution_of(cone.complex(), &edge_ideal(&g)).unwrap());
        prop_assert!(is_minimal(cone.complex()));
    }
}

/// Every order with `xy` least on every `L(a,b,c)` with `a+b+2c <= 5`.
#[test]
fn lyubeznik_orders_with_xy_least() {
    for c in 0..=2usize {
        for a in 0..=5usize {
            for b in 0..=5usize {
                if a + b + 2 * c > 5 {
                    continue;
                }
                let ideal = edge_ideal(&build_family(&FamilySpec::Lyubeznik { a, b, c }).unwrap());
                let (betti, _) = lyubeznik_betti(a, b, c);
                let xy = ideal.vars().var("x").unwrap().lcm(&ideal.vars().var("y").unwrap()).unwrap();
                let k = ideal.generators().iter().position(|g| *g == xy).unwrap();
                let rest: Vec<usize> = (0..ideal.len()).filter(|&i| i != k).collect();
                for perm in rest.iter().copied().permutations(rest.len()) {
                    let mut order = vec![k];
                    order.extend(perm);
                    let reordered = ideal.reordered(&order).unwrap();
                    let m = lyubeznik_matching(&reordered, None).unwrap();
                    assert!(m.drops().iter().all(|&d| d == 0), "L({a},{b},{c}) {order:?}");
                    let l = lyubeznik_resolution(&reordered, None).unwrap();
                    assert!(is_minimal(&l), "L({a},{b},{c}) {order:?}");
                    assert_eq!(l.ranks(), betti, "L({a},{b},{c}) {order:?}");
                }
            }
        }
    }
}

#[test]
fn every_small_tree_diameter_matches_double_bfs() {
    // all labelled trees on up to 7 vertices via parent sequences
    for n in 2..=7usize {
        for parents in (1..n).map(|i| 0..i).multi_cartesian_product() {
            let g = random_tree(&parents);
            let far = |s: usize| {
                let d = g.bfs(s);
                (0..n).max_by_key(|&v| (d[v].unwrap(), v)).map(|v| (v, d[v].unwrap())).unwrap()
            };
            let (u, _) = far(0);
            assert_eq!(graph_diameter(&g), far(u).1, "{parents:?}");
        }
    }
}

#[test]
fn subsets_match_taylor_labels() {
    let ideal = squarefree_ideal(4, &[0b0011, 0b0110, 0b1100]);
    let t = taylor_resolution(&ideal, None).unwrap();
    for i in 0..=3 {
        let got: Vec<Subset> = t
            .module(i)
            .iter()
            .map(|l| match l.tag {
                Tag::Subset(s) => s,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got.len(), choose(3, i));
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }
}
