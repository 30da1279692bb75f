mod common;

use common::*;
use minorkit::graph::named::*;
use minorkit::graph::{canonical_code, from_graph6, is_isomorphic, is_planar, planar_embedding, to_graph6};
use minorkit::minor::family_minor;
use minorkit::Graph;
use proptest::prelude::*;

#[test]
fn eleven_classes_on_four_vertices() {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    let all: Vec<Graph> = (0..64u32)
        .map(|m| {
            let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).collect();
            Graph::from_edges(4, &e).unwrap()
        })
        .collect();
    let mut reps: Vec<Graph> = Vec::new();
    for g in &all {
        if !reps.iter().any(|r| brute_isomorphic(r, g)) {
            reps.push(g.clone());
        }
    }
    assert_eq!(reps.len(), 11);
    let mut codes: Vec<_> = reps.iter().map(canonical_code).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), 11);
    for a in &all {
        for b in &all {
            assert_eq!(canonical_code(a) == canonical_code(b), brute_isomorphic(a, b));
        }
    }
}

#[test]
fn code_invariant_under_relabeling() {
    let mut r = rng(7);
    let graphs = vec![petersen(), grid(4, 4), complete_bipartite(3, 4), random_graph(&mut r, 12, 0.4), random_graph(&mut r, 9, 0.3)];
    for g in graphs {
        let c = canonical_code(&g);
        for _ in 0..1000 {
            let p = random_perm(&mut r, g.n());
            assert_eq!(canonical_code(&g.relabel(&p)), c);
        }
    }
}

#[test]
fn codes_match_brute_isomorphism_on_random_pairs() {
    let mut r = rng(11);
    for _ in 0..400 {
        let n = r.gen_range(1..=7);
        let g = random_graph(&mut r, n, 0.5);
        let h = random_graph(&mut r, n, 0.5);
        assert_eq!(is_isomorphic(&g, &h), brute_isomorphic(&g, &h));
    }
}

#[test]
fn planarity_matches_wagner() {
    let mut r = rng(3);
    let kur = [complete(5), complete_bipartite(3, 3)];
    for _ in 0..300 {
        let n = r.gen_range(5..=8);
        let g = { let pr = r.gen_range(0.3..0.8); random_graph(&mut r, n, pr) };
        let planar = is_planar(&g);
        assert_eq!(planar, !family_minor(&kur, &g).unwrap(), "{g:?}");
        if planar {
            assert!(planar_embedding(&g).unwrap().is_plane_embedding_of(&g));
        }
    }
}

use rand::Rng;

proptest! {
    #[test]
    fn ops_keep_graphs_simple(n in 2usize..10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5);
        for (u, v) in g.edges() {
            for h in [g.contract_edge(u, v).unwrap(), g.delete_edge(u, v).unwrap(), g.subdivide_edge(u, v).unwrap()] {
                for x in 0..h.n() {
                    prop_assert!(!h.has_edge(x, x));
                    for &y in h.neighbors(x) { prop_assert!(h.has_edge(y, x)); }
                }
            }
            prop_assert!(g.contract_edge(u, v).unwrap().detail() <= g.detail());
            prop_assert!(g.delete_edge(u, v).unwrap().detail() <= g.detail());
        }
        for v in 0..n {
            prop_assert!(g.delete_vertex(v).unwrap().detail() <= g.detail());
        }
    }

    #[test]
    fn subdivide_then_dissolve_is_identity(n in 2usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5);
        for (u, v) in g.edges() {
            let s = g.subdivide_edge(u, v).unwrap();
            let back = s.dissolve_vertex(s.n() - 1).unwrap();
            prop_assert!(is_isomorphic(&back, &g));
        }
    }

    #[test]
    fn graph6_round_trip(n in 0usize..70, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.3);
        let s = to_graph6(&g);
        prop_assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn apex_zero_iff_planar(n in 1usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.6);
        prop_assert_eq!(minorkit::graph::apex_number(&g).unwrap() == 0, is_planar(&g));
    }
}
