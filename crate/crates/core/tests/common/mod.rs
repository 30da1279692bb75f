#![allow(dead_code)]

use minorkit::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    out.push(a.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Brute-force isomorphism by trying every bijection.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.m() != h.m() {
        return false;
    }
    let eg = g.edges();
    permutations(g.n()).iter().any(|p| eg.iter().all(|&(u, v)| h.has_edge(p[u], p[v])))
}

/// Brute-force minor test: every map of host vertices to pattern vertices
/// or "deleted", checked against the model conditions.
pub fn brute_minor(h: &Graph, g: &Graph) -> bool {
    let (p, n) = (h.n(), g.n());
    if p == 0 {
        return true;
    }
    let base = p + 1;
    let total = base.pow(n as u32);
    let mut lab = vec![0usize; n];
    'outer: for code in 0..total {
        let mut c = code;
        for l in lab.iter_mut() {
            *l = c % base;
            c /= base;
        }
        let mut sets = vec![Vec::new(); p];
        for (v, &l) in lab.iter().enumerate() {
            if l > 0 {
                sets[l - 1].push(v);
            }
        }
        for s in &sets {
            if !g.is_connected_subset(s) {
                continue 'outer;
            }
        }
        for (a, b) in h.edges() {
            if !sets[a].iter().any(|&u| sets[b].iter().any(|&w| g.has_edge(u, w))) {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

/// Independent check of a minor model: nonempty, disjoint, connected
/// branch sets with every target edge realised by a host edge.
pub fn is_minor_model(host: &Graph, target: &Graph, sets: &[Vec<usize>]) -> bool {
    if sets.len() != target.n() {
        return false;
    }
    let mut owner = vec![usize::MAX; host.n()];
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return false;
        }
        for &v in s {
            if v >= host.n() || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
        }
    }
    for (i, s) in sets.iter().enumerate() {
        let mut seen = vec![s[0]];
        let mut k = 0;
        while k < seen.len() {
            let v = seen[k];
            k += 1;
            for &u in host.neighbors(v) {
                if owner[u] == i && !seen.contains(&u) {
                    seen.push(u);
                }
            }
        }
        if seen.len() != s.len() {
            return false;
        }
    }
    target.edges().iter().all(|&(a, b)| sets[a].iter().any(|&u| host.neighbors(u).iter().any(|&w| owner[w] == b)))
}

/// One monotonicity violation: entry, the parameter that grew, the base
/// parameters, and both values (`None` past the bit cap).
pub type SweepViolation = (String, String, Vec<(String, u64)>, Option<String>, Option<String>);

/// Random pairs `p ≤ p'` differing in one parameter, over the whole
/// catalog, with values in `0..=range` and `at ≤ a ≤ s` respected.
/// Returns the number of pairs compared and the violations.
pub fn bound_sweep(pairs: usize, seed: u64, range: u64, max_bits: u64) -> (usize, Vec<SweepViolation>) {
    use minorkit::bounds::{BoundParams, Constants, Evaluator, Ful, CATALOG};
    use minorkit::Error;
    let mut r = rng(seed);
    let ev = || Evaluator::new(Constants::default(), Ful::Polynomial(vec![1, 1])).with_max_bits(max_bits);
    let value = |name: &str, p: &BoundParams| match ev().evaluate(name, p) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ResourceLimit(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let legal = |p: &BoundParams| {
        let g = |k: &str| p.0.get(k).copied();
        let a_ok = match (g("a"), g("s")) {
            (Some(a), Some(s)) => a <= s,
            _ => true,
        };
        let at_ok = match (g("at"), g("a")) {
            (Some(at), Some(a)) => at <= a,
            _ => true,
        };
        a_ok && at_ok
    };
    let mut done = 0;
    let mut bad = Vec::new();
    let mut attempts = 0;
    while done < pairs {
        attempts += 1;
        assert!(attempts < pairs * 100, "sweep cannot find legal parameter pairs");
        let e = &CATALOG[r.gen_range(0..CATALOG.len())];
        let mut p = BoundParams::default();
        for &k in e.params {
            p.set(k, r.gen_range(0..=range));
        }
        let grow = e.params[r.gen_range(0..e.params.len())];
        let mut q = p.clone();
        q.set(grow, p.0[grow] + r.gen_range(1..=3));
        if !legal(&p) || !legal(&q) {
            continue;
        }
        let (Ok(lo), Ok(hi)) = (value(e.name, &p), value(e.name, &q)) else { continue };
        done += 1;
        let ok = match (&lo, &hi) {
            (Some(x), Some(y)) => x <= y,
            (None, Some(_)) => false,
            _ => true,
        };
        if !ok {
            bad.push((
                e.name.to_string(),
                grow.to_string(),
                p.0.iter().map(|(k, v)| (k.clone(), *v)).collect(),
                lo.map(|v| v.to_string()),
                hi.map(|v| v.to_string()),
            ));
        }
    }
    (done, bad)
}
