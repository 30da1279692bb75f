mod common;

use common::*;
use minorkit::graph::named::*;
use minorkit::minor::*;
use minorkit::Graph;
use rand::Rng;

#[test]
fn minor_search_matches_partition_oracle() {
    let mut r = rng(21);
    let mut yes = 0;
    for _ in 0..250 {
        let n = r.gen_range(1..=7);
        let p = r.gen_range(1..=5usize.min(n));
        let g = { let pr = r.gen_range(0.3..0.9); random_graph(&mut r, n, pr) };
        let h = { let pr = r.gen_range(0.3..1.0); random_graph(&mut r, p, pr) };
        let w = is_minor(&h, &g).unwrap();
        if let Some(w) = &w {
            assert!(w.is_valid(&g));
            assert_eq!(w.target, h);
            yes += 1;
        }
        assert_eq!(w.is_some(), brute_minor(&h, &g), "h={h:?} g={g:?}");
    }
    assert!(yes > 20);
}

#[test]
fn minor_relation_is_transitive_on_chains() {
    let mut r = rng(5);
    for _ in 0..60 {
        let f = random_graph(&mut r, 8, 0.6);
        let mut g = f.clone();
        for _ in 0..3 {
            let edges = g.edges();
            if edges.is_empty() {
                break;
            }
            let (u, v) = edges[r.gen_range(0..edges.len())];
            g = if r.gen_bool(0.5) { g.contract_edge(u, v).unwrap() } else { g.delete_edge(u, v).unwrap() };
        }
        let mut h = g.clone();
        for _ in 0..2 {
            let edges = h.edges();
            if edges.is_empty() || h.n() < 2 {
                break;
            }
            let (u, v) = edges[r.gen_range(0..edges.len())];
            h = h.contract_edge(u, v).unwrap();
        }
        assert!(is_minor(&g, &f).unwrap().is_some());
        assert!(is_minor(&h, &g).unwrap().is_some());
        assert!(is_minor(&h, &f).unwrap().is_some());
    }
}

#[test]
fn hitting_set_matches_exhaustive_and_is_monotone() {
    let mut r = rng(8);
    let families = [vec![complete(3)], vec![complete(2)], vec![complete(4)], vec![complete(5), complete_bipartite(3, 3)]];
    for _ in 0..120 {
        let n = r.gen_range(3..=8);
        let g = { let pr = r.gen_range(0.3..0.9); random_graph(&mut r, n, pr) };
        let fam = &families[r.gen_range(0..families.len())];
        for k in 0..=3 {
            let a = hitting_set(&g, fam, k).unwrap();
            let b = hitting_set_exhaustive(&g, fam, k).unwrap();
            assert_eq!(a.is_some(), b.is_some());
            if let Some(s) = a {
                assert!(s.len() <= k);
                assert!(!family_minor(fam, &g.delete_vertices(&s).0).unwrap());
            }
            if k > 0 && hitting_set(&g, fam, k).unwrap().is_none() {
                assert!(hitting_set(&g, fam, k - 1).unwrap().is_none());
            }
        }
    }
}

#[test]
fn topological_minor_agrees_with_dissolution_oracle() {
    // A subcubic pattern is a topological minor iff it is a minor.
    let mut r = rng(13);
    let pattern = [complete(4), cycle(4), path(4), complete_bipartite(1, 3)];
    for _ in 0..80 {
        let n = r.gen_range(4..=8);
        let g = { let pr = r.gen_range(0.2..0.7); random_graph(&mut r, n, pr) };
        for h in &pattern {
            assert_eq!(is_topological_minor(h, &g).unwrap(), is_minor(h, &g).unwrap().is_some());
        }
    }
    let _ = Graph::new(0);
}
