mod common;

use common::*;
use minorkit::decomp::*;
use minorkit::graph::named::*;
use minorkit::Budget;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elimination_orders_give_valid_decompositions(n in 1usize..12, p in 0.1f64..0.8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p);
        let order = random_perm(&mut r, n);
        let td = from_elimination(&g, &order).unwrap();
        prop_assert!(td.validate(&g).is_valid());
        let (tw, best) = treewidth_exact(&g, &Budget::default()).unwrap();
        prop_assert!(best.validate(&g).is_valid());
        prop_assert_eq!(best.width(), tw);
        prop_assert!(tw <= td.width());
        let root = r.gen_range(0..td.nodes());
        let bin = make_binary_rooted(&td, root).unwrap();
        prop_assert!(bin.is_binary());
        prop_assert!(bin.validate(&g).is_valid());
        prop_assert_eq!(bin.width(), td.width());
    }

    #[test]
    fn refinements_stay_valid(n in 2usize..10, p in 0.2f64..0.7, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p);
        let td = from_elimination(&g, &random_perm(&mut r, n)).unwrap();
        for t in [td.with_adhesions(), td.prune(), td.dedup_adjacent()] {
            prop_assert!(t.validate(&g).is_valid());
            prop_assert!(t.width() <= td.width());
            prop_assert!(t.size_property(&g));
        }
        let (refined, _) = refine_linked(&td, &g, 3).unwrap();
        prop_assert!(refined.validate(&g).is_valid());
        let (back, m) = TreeDecomposition::from_td(&refined.to_td(n)).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(back.bags, refined.bags);
    }

    #[test]
    fn flow_equals_separator(n in 2usize..14, p in 0.1f64..0.6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p);
        let mut perm = random_perm(&mut r, n);
        let x: Vec<usize> = perm.drain(..r.gen_range(1..=n.min(4))).collect();
        let y: Vec<usize> = random_perm(&mut r, n).into_iter().take(r.gen_range(1..=n.min(4))).collect();
        let f = max_disjoint_paths(&g, &x, &y).unwrap();
        let sep = min_vertex_separator(&g, &x, &y).unwrap();
        prop_assert_eq!(sep.len(), f);
        let (rest, map) = g.delete_vertices(&sep);
        let keep = |s: &[usize]| s.iter().filter_map(|v| map.iter().position(|m| m == v)).collect::<Vec<_>>();
        prop_assert_eq!(max_disjoint_paths(&rest, &keep(&x), &keep(&y)).unwrap(), 0);
        let ps = disjoint_paths(&g, &x, &y, f).unwrap().unwrap();
        prop_assert!(verify_paths(&g, &x, &y, &ps, f));
        prop_assert!(disjoint_paths(&g, &x, &y, f + 1).unwrap().is_none());
    }

    #[test]
    fn pigeonhole_span_is_sound(r in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let len = m.pow(r as u32) + g.gen_range(0..5);
        let w: Vec<usize> = (0..len).map(|_| g.gen_range(1..=r)).collect();
        let (k, a, b) = pigeonhole_subword(&w, r, m).unwrap();
        prop_assert!(a < b && b <= w.len());
        prop_assert!(w[a..b].iter().all(|&c| c >= k));
        prop_assert!(w[a..b].iter().filter(|&&c| c == k).count() >= m);
    }
}

#[test]
fn complete_and_cycle_widths() {
    for n in 3..=8 {
        assert_eq!(treewidth_exact(&cycle(n), &Budget::default()).unwrap().0, 2);
        assert_eq!(treewidth_exact(&complete(n), &Budget::default()).unwrap().0, n - 1);
    }
    assert_eq!(treewidth_exact(&petersen(), &Budget::default()).unwrap().0, 4);
}
