mod common;

use common::*;
use minorkit::boundaried::*;
use minorkit::bounds::{BoundParams, Constants, Evaluator, Ful, CATALOG};
use minorkit::graph::named::*;
use proptest::prelude::*;
use std::sync::OnceLock;

fn reps() -> &'static RepresentativeSet {
    static R: OnceLock<RepresentativeSet> = OnceLock::new();
    R.get_or_init(|| representatives(2, 2, 3, 3).unwrap())
}

/// Relabels inner vertices only; the boundary keeps its order.
fn shuffle_inner(g: &BoundariedGraph, seed: u64) -> BoundariedGraph {
    let n = g.n();
    let t = g.t();
    let mut perm: Vec<usize> = (0..n).collect();
    let inner: Vec<usize> = (0..n).filter(|&v| !g.is_boundary(v)).collect();
    let shuffled = {
        let p = random_perm(&mut rng(seed), inner.len());
        p.iter().map(|&i| inner[i]).collect::<Vec<_>>()
    };
    for (a, b) in inner.iter().zip(&shuffled) {
        perm[*a] = *b;
    }
    let h = g.graph.relabel(&perm);
    let boundary: Vec<usize> = g.boundary.iter().map(|&v| perm[v]).collect();
    assert_eq!(boundary.len(), t);
    BoundariedGraph::new(h, boundary).unwrap()
}

fn arbitrary_bg(n: usize, t: usize, p: f64, seed: u64) -> BoundariedGraph {
    let g = random_graph(&mut rng(seed), n, p);
    BoundariedGraph::with_prefix_boundary(g, t.min(n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn codes_ignore_inner_labels(n in 1usize..8, t in 0usize..4, p in 0.2f64..0.8, seed in any::<u64>()) {
        let g = arbitrary_bg(n, t, p, seed);
        let h = shuffle_inner(&g, seed ^ 1);
        prop_assert_eq!(g.code(), h.code());
        prop_assert_eq!(folio(&g, 2).unwrap(), folio(&h, 2).unwrap());
        prop_assert_eq!(BoundariedGraph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn folio_grows_with_detail(n in 1usize..7, t in 0usize..3, p in 0.2f64..0.8, seed in any::<u64>()) {
        let g = arbitrary_bg(n, t, p, seed);
        let f: Vec<Folio> = (0..=3).map(|l| folio(&g, l).unwrap()).collect();
        for w in f.windows(2) {
            prop_assert!(w[0].members.is_subset(&w[1].members));
        }
    }

    #[test]
    fn minor_relation_on_chains(n in 3usize..7, p in 0.3f64..0.8, seed in any::<u64>()) {
        let chain = random_minor_chain(2, n, p, 4, &mut rng(seed)).unwrap();
        for w in chain.windows(2) {
            prop_assert!(compatible(&w[0], &w[1]));
            prop_assert!(boundaried_minor(&w[0], &w[1]).unwrap());
            prop_assert!(w[0].n() <= w[1].n());
        }
        let last = chain.last().unwrap();
        prop_assert!(boundaried_minor(&chain[0], last).unwrap());
        prop_assert!(boundaried_minor(last, last).unwrap());
    }

    #[test]
    fn characteristic_is_label_invariant(n in 2usize..6, p in 0.3f64..0.8, seed in any::<u64>()) {
        let g = arbitrary_bg(n, 2, p, seed);
        let h = shuffle_inner(&g, seed ^ 7);
        let a = characteristic(&g, 1, 2, reps()).unwrap();
        let b = characteristic(&h, 1, 2, reps()).unwrap();
        prop_assert_eq!(a.values, b.values);
    }

    #[test]
    fn glue_counts_vertices(n1 in 2usize..6, n2 in 2usize..6, seed in any::<u64>()) {
        let a = arbitrary_bg(n1, 2, 0.5, seed);
        let b = arbitrary_bg(n2, 2, 0.5, seed ^ 3);
        if compatible(&a, &b) {
            let g = glue(&a, &b).unwrap();
            prop_assert_eq!(g.n(), n1 + n2 - 2);
        }
    }
}

#[test]
fn every_bounded_order_is_reflexive_and_transitive() {
    let order = BoundedOrder::new(2, 3).unwrap();
    let gs = all_boundaried(2, 3).unwrap();
    let sig: Vec<Signature> = gs.iter().map(|g| order.signature(g).unwrap()).collect();
    for a in &sig {
        assert!(a.leq(a));
        for b in &sig {
            for c in &sig {
                if a.leq(b) && b.leq(c) {
                    assert!(a.leq(c));
                }
            }
        }
    }
}

#[test]
fn representative_json_round_trip() {
    let r = reps();
    let back = RepresentativeSet::from_json(&r.to_json()).unwrap();
    assert_eq!(back.classes.len(), r.classes.len());
    let two = BoundariedGraph::with_prefix_boundary(complete(2), 2).unwrap();
    assert_eq!(back.class_of(&two).unwrap(), r.class_of(&two).unwrap());
}

/// Monotone entries, i.e. the catalog minus the forcing family whose exact
/// formula drops as `a` grows (recorded in the ledger).
#[test]
fn bounds_monotone_outside_forcing_family() {
    let (pairs, bad) = bound_sweep(600, 77, 6, 2048);
    assert!(pairs == 600);
    let forcing = ["forcing_r", "apex_wall_height", "apex_bag_count", "apex_bag_depth", "tw_bound", "obstruction_size"];
    let other: Vec<_> = bad.iter().filter(|v| !(forcing.contains(&v.0.as_str()) && v.1 == "a")).collect();
    assert!(other.is_empty(), "{other:?}");
}

#[test]
fn traces_recheck() {
    let ev = Evaluator::new(Constants::default(), Ful::Polynomial(vec![1, 1]));
    for e in CATALOG {
        let mut p = BoundParams::default();
        for &k in e.params {
            p.set(k, 2);
        }
        let (_, trace) = ev.explain(e.name, &p).unwrap();
        assert!(ev.recheck(&trace).unwrap(), "{}", e.name);
        assert_eq!(trace.root().entry, e.name);
    }
}
