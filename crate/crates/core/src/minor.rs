//! Minor and topological-minor containment, and F-hitting sets.
//!
//! Minor search assigns host vertices in increasing id order to a branch
//! set or to the deleted side, pruning states in which some branch set can
//! no longer become connected or some pattern edge can no longer be
//! realised. Hosts are limited to 64 vertices, except that planar hosts are
//! answered directly for non-planar patterns.

use crate::error::{invalid, Budget, Error, Result};
use crate::graph::{canonical_code, is_planar, CanonicalCode, ContractionWitness, Graph};
use crate::util::{bits, Combinations};
use std::collections::HashMap;

/// Index of the family member found, with its model.
pub type Model = (usize, ContractionWitness);

pub fn is_minor(h: &Graph, g: &Graph) -> Result<Option<ContractionWitness>> {
    is_minor_budget(h, g, &Budget::default())
}

pub fn is_minor_budget(h: &Graph, g: &Graph, budget: &Budget) -> Result<Option<ContractionWitness>> {
    if h.n() == 0 {
        return Ok(Some(ContractionWitness { target: h.clone(), branch_sets: Vec::new() }));
    }
    if h.n() > g.n() || h.m() > g.m() {
        return Ok(None);
    }
    let h_planar = h.n() < 5 || is_planar(h);
    if !h_planar && is_planar(g) {
        return Ok(None);
    }
    if g.n() > 64 {
        return Err(Error::ResourceLimit(format!(
            "minor search supports hosts up to 64 vertices, host has {}",
            g.n()
        )));
    }
    let mut s = MinorSearch::new(h, g, budget);
    Ok(s.run()?.map(|sets| ContractionWitness {
        target: h.clone(),
        branch_sets: sets.iter().map(|&m| bits(m).collect()).collect(),
    }))
}

struct MinorSearch<'a> {
    n: usize,
    adj: Vec<u64>,
    hedges: Vec<(usize, usize)>,
    /// `twin_before[i]` lists pattern twins `j < i`.
    twin_before: Vec<Vec<usize>>,
    budget: &'a Budget,
    sets: Vec<u64>,
}

impl<'a> MinorSearch<'a> {
    fn new(h: &Graph, g: &Graph, budget: &'a Budget) -> Self {
        let p = h.n();
        let twins = |i: usize, j: usize| {
            let ni: Vec<usize> = h.neighbors(i).iter().copied().filter(|&x| x != j).collect();
            let nj: Vec<usize> = h.neighbors(j).iter().copied().filter(|&x| x != i).collect();
            ni == nj
        };
        MinorSearch {
            n: g.n(),
            adj: (0..g.n()).map(|v| g.mask(v)).collect(),
            hedges: h.edges(),
            twin_before: (0..p).map(|i| (0..i).filter(|&j| twins(i, j)).collect()).collect(),
            budget,
            sets: vec![0; p],
        }
    }

    fn nbhd(&self, m: u64) -> u64 {
        bits(m).fold(0, |a, v| a | self.adj[v])
    }

    /// Closure of the lowest vertex of `s` inside `s | free`.
    fn reach(&self, s: u64, free: u64) -> u64 {
        let allowed = s | free;
        let mut r = s & s.wrapping_neg();
        loop {
            let next = (r | self.nbhd(r)) & allowed;
            if next == r {
                return r;
            }
            r = next;
        }
    }

    fn connected(&self, s: u64) -> bool {
        s != 0 && self.reach(s, 0) == s
    }

    fn complete(&self) -> bool {
        self.sets.iter().all(|&s| self.connected(s))
            && self.hedges.iter().all(|&(i, j)| self.nbhd(self.sets[i]) & self.sets[j] != 0)
    }

    fn feasible(&self, free: u64) -> bool {
        let empties = self.sets.iter().filter(|&&s| s == 0).count();
        if empties > free.count_ones() as usize {
            return false;
        }
        let mut reach = vec![0u64; self.sets.len()];
        for (i, &s) in self.sets.iter().enumerate() {
            if s != 0 {
                let r = self.reach(s, free);
                if s & !r != 0 {
                    return false;
                }
                reach[i] = r;
            }
        }
        for &(i, j) in &self.hedges {
            let (ri, rj) = (reach[i], reach[j]);
            match (ri != 0, rj != 0) {
                (true, true) => {
                    if ri & rj & free == 0 && self.nbhd(ri) & rj == 0 {
                        return false;
                    }
                }
                (true, false) | (false, true) => {
                    let r = ri | rj;
                    if (r | self.nbhd(r)) & free == 0 {
                        return false;
                    }
                }
                (false, false) => {}
            }
        }
        true
    }

    fn run(&mut self) -> Result<Option<Vec<u64>>> {
        if self.rec(0)? {
            Ok(Some(self.sets.clone()))
        } else {
            Ok(None)
        }
    }

    fn rec(&mut self, idx: usize) -> Result<bool> {
        self.budget.tick()?;
        if self.complete() {
            return Ok(true);
        }
        if idx == self.n {
            return Ok(false);
        }
        let free = if idx >= 64 { 0 } else { (!0u64 << idx) & low_mask(self.n) };
        if !self.feasible(free) {
            return Ok(false);
        }
        let v = idx;
        let bit = 1u64 << v;
        let p = self.sets.len();
        // Adjacent nonempty sets first, then empty sets, then deletion,
        // then nonadjacent nonempty sets.
        let mut order: Vec<Option<usize>> = Vec::with_capacity(p + 1);
        order.extend((0..p).filter(|&i| self.sets[i] & self.adj[v] != 0).map(Some));
        order.extend(
            (0..p)
                .filter(|&i| self.sets[i] == 0 && self.twin_before[i].iter().all(|&j| self.sets[j] != 0))
                .map(Some),
        );
        order.push(None);
        order.extend((0..p).filter(|&i| self.sets[i] != 0 && self.sets[i] & self.adj[v] == 0).map(Some));
        for choice in order {
            if let Some(i) = choice {
                self.sets[i] |= bit;
                let hit = self.rec(idx + 1)?;
                if hit {
                    return Ok(true);
                }
                self.sets[i] &= !bit;
            } else if self.rec(idx + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// Whether some member of `family` is a minor of `g`.
pub fn family_minor(family: &[Graph], g: &Graph) -> Result<bool> {
    Ok(family_model(family, g, &Budget::default())?.is_some())
}

/// First family member (by index) that is a minor of `g`, with its model.
pub fn family_model(family: &[Graph], g: &Graph, budget: &Budget) -> Result<Option<Model>> {
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    for (i, h) in family.iter().enumerate() {
        if let Some(w) = is_minor_budget(h, g, budget)? {
            return Ok(Some((i, w)));
        }
    }
    Ok(None)
}

/// Branch vertices and subdivision paths of a topological minor.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TopologicalModel {
    /// `branch[i]` is the host vertex of pattern vertex `i`.
    pub branch: Vec<usize>,
    /// One host path per pattern edge, in `h.edges()` order.
    pub paths: Vec<Vec<usize>>,
}

pub fn is_topological_minor(h: &Graph, g: &Graph) -> Result<bool> {
    Ok(topological_model(h, g, &Budget::default())?.is_some())
}

/// Injective branch-vertex placement followed by internally disjoint path
/// routing; every path interior avoids branch vertices and other paths.
pub fn topological_model(h: &Graph, g: &Graph, budget: &Budget) -> Result<Option<TopologicalModel>> {
    if h.n() > g.n() || h.m() > g.m() {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(h.degree(i)), i));
    let mut t = Topo {
        h,
        g,
        budget,
        order,
        edges: h.edges(),
        branch: vec![usize::MAX; h.n()],
        used: vec![false; g.n()],
        paths: Vec::new(),
    };
    if t.place(0)? {
        Ok(Some(TopologicalModel { branch: t.branch, paths: t.paths }))
    } else {
        Ok(None)
    }
}

struct Topo<'a> {
    h: &'a Graph,
    g: &'a Graph,
    budget: &'a Budget,
    order: Vec<usize>,
    edges: Vec<(usize, usize)>,
    branch: Vec<usize>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
}

impl Topo<'_> {
    fn place(&mut self, k: usize) -> Result<bool> {
        self.budget.tick()?;
        if k == self.order.len() {
            return self.route(0);
        }
        let i = self.order[k];
        for x in 0..self.g.n() {
            if self.used[x] || self.g.degree(x) < self.h.degree(i) {
                continue;
            }
            self.branch[i] = x;
            self.used[x] = true;
            if self.place(k + 1)? {
                return Ok(true);
            }
            self.used[x] = false;
            self.branch[i] = usize::MAX;
        }
        Ok(false)
    }

    fn route(&mut self, e: usize) -> Result<bool> {
        if e == self.edges.len() {
            return Ok(true);
        }
        let (a, b) = (self.branch[self.edges[e].0], self.branch[self.edges[e].1]);
        let mut path = vec![a];
        self.extend(e, b, &mut path)
    }

    fn extend(&mut self, e: usize, target: usize, path: &mut Vec<usize>) -> Result<bool> {
        self.budget.tick()?;
        let last = *path.last().unwrap();
        let nbrs: Vec<usize> = self.g.neighbors(last).to_vec();
        for u in nbrs {
            if u == target {
                path.push(u);
                self.paths.push(path.clone());
                if self.route(e + 1)? {
                    return Ok(true);
                }
                self.paths.pop();
                path.pop();
            } else if !self.used[u] {
                self.used[u] = true;
                path.push(u);
                if self.extend(e, target, path)? {
                    return Ok(true);
                }
                path.pop();
                self.used[u] = false;
            }
        }
        Ok(false)
    }
}

/// `S` with `|S| <= k` and `g - S` excluding every member of `family`, by
/// branching on the vertices of an inclusion-minimal model.
pub fn hitting_set(g: &Graph, family: &[Graph], k: usize) -> Result<Option<Vec<usize>>> {
    hitting_set_budget(g, family, k, &Budget::default())
}

pub fn hitting_set_budget(g: &Graph, family: &[Graph], k: usize, budget: &Budget) -> Result<Option<Vec<usize>>> {
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    let mut memo: HashMap<CanonicalCode, usize> = HashMap::new();
    let map: Vec<usize> = (0..g.n()).collect();
    let res = hit_rec(g, &map, family, k, budget, &mut memo)?;
    Ok(res.map(|mut s| {
        s.sort_unstable();
        s
    }))
}

fn hit_rec(
    g: &Graph,
    map: &[usize],
    family: &[Graph],
    k: usize,
    budget: &Budget,
    memo: &mut HashMap<CanonicalCode, usize>,
) -> Result<Option<Vec<usize>>> {
    budget.tick()?;
    let code = canonical_code(g);
    if memo.get(&code).is_some_and(|&failed| failed >= k) {
        return Ok(None);
    }
    let Some((_, w)) = family_model(family, g, budget)? else {
        return Ok(Some(Vec::new()));
    };
    if k == 0 {
        memo.insert(code, 0);
        return Ok(None);
    }
    let mut u: Vec<usize> = w.branch_sets.concat();
    u.sort_unstable();
    // Shrink to an inclusion-minimal vertex set still hosting a member.
    let mut i = 0;
    while i < u.len() {
        let mut rest = u.clone();
        rest.remove(i);
        if family_model(family, &g.induced(&rest), budget)?.is_some() {
            u = rest;
        } else {
            i += 1;
        }
    }
    for &x in &u {
        let (sub, keep) = g.delete_vertices(&[x]);
        let submap: Vec<usize> = keep.iter().map(|&v| map[v]).collect();
        if let Some(mut s) = hit_rec(&sub, &submap, family, k - 1, budget, memo)? {
            s.push(map[x]);
            return Ok(Some(s));
        }
    }
    let e = memo.entry(code).or_insert(0);
    *e = (*e).max(k);
    Ok(None)
}

/// Cross-check mode: subsets by increasing size. Limited to hosts with
/// fewer than 20 vertices.
pub fn hitting_set_exhaustive(g: &Graph, family: &[Graph], k: usize) -> Result<Option<Vec<usize>>> {
    if g.n() >= 20 {
        return Err(Error::ResourceLimit("exhaustive hitting-set mode needs fewer than 20 vertices".into()));
    }
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    for size in 0..=k.min(g.n()) {
        for s in Combinations::new(g.n(), size) {
            if !family_minor(family, &g.delete_vertices(&s).0)? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Size of a minimum F-hitting set.
pub fn min_hitting_size(g: &Graph, family: &[Graph]) -> Result<usize> {
    for k in 0..=g.n() {
        if hitting_set(g, family, k)?.is_some() {
            return Ok(k);
        }
    }
    unreachable!("deleting every vertex always hits")
}

/// Membership in `A_k(excl(F))`.
pub fn is_in_ak(g: &Graph, family: &[Graph], k: usize) -> Result<bool> {
    Ok(hitting_set(g, family, k)?.is_some())
}

pub fn is_in_ak_budget(g: &Graph, family: &[Graph], k: usize, budget: &Budget) -> Result<bool> {
    Ok(hitting_set_budget(g, family, k, budget)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn minor_examples() {
        assert!(is_minor(&complete(1), &path(2)).unwrap().is_some());
        let w = is_minor(&complete(5), &petersen()).unwrap().expect("K5 in Petersen");
        assert!(w.is_valid(&petersen()));
        assert!(is_minor(&complete(5), &grid(10, 10)).unwrap().is_none());
        assert!(is_minor(&complete_bipartite(3, 3), &petersen()).unwrap().is_some());
        assert!(is_minor(&complete(6), &petersen()).unwrap().is_none());
    }

    #[test]
    fn family_examples() {
        let tree = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        assert!(!family_minor(&[complete(3)], &tree).unwrap());
        assert!(!family_minor(&[complete(2)], &complete(1)).unwrap());
        assert!(family_minor(&[complete(5), complete_bipartite(3, 3)], &complete(6)).unwrap());
        assert!(family_minor(&[], &complete(3)).is_err());
    }

    #[test]
    fn topological_examples() {
        assert!(is_topological_minor(&complete(3), &cycle(9)).unwrap());
        let mut sub = complete(4);
        for (u, v) in complete(4).edges() {
            sub = sub.subdivide_edge(u, v).unwrap();
        }
        assert!(is_topological_minor(&complete(4), &sub).unwrap());
        assert!(!is_topological_minor(&star(4), &petersen()).unwrap());
        assert!(!is_topological_minor(&star(4), &grid(2, 6)).unwrap());
    }

    #[test]
    fn hitting_examples() {
        let s = hitting_set(&complete(3), &[complete(2)], 2).unwrap().unwrap();
        assert_eq!(s.len(), 2);
        assert!(hitting_set(&complete(5), &[complete(3)], 2).unwrap().is_none());
        assert_eq!(hitting_set(&complete(5), &[complete(3)], 3).unwrap().unwrap().len(), 3);
        let two_k2 = by_name("2K2").unwrap();
        assert!(!is_in_ak(&two_k2, &[complete(2)], 1).unwrap());
        let fam = [complete(5), complete_bipartite(3, 3)];
        assert!(is_in_ak(&grid(3, 3), &fam, 0).unwrap());
        // K6 minus any vertex is K5, so one deletion never suffices.
        assert!(!is_in_ak(&complete(6), &fam, 1).unwrap());
        assert!(is_in_ak(&complete(6), &fam, 2).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let b = Budget::new(5);
        let r = is_minor_budget(&complete(5), &petersen(), &b);
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }
}
