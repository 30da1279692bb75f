//! Tree decompositions: validation, exact treewidth for small graphs,
//! binary rooting, the linkedness checker with its max-flow oracle, and the
//! pigeonhole subword utility.

use crate::error::{invalid, Budget, Error, Result};
use crate::graph::Graph;
use crate::util::bits;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub tree: Graph,
    /// Sorted bags, indexed by tree node.
    pub bags: Vec<Vec<usize>>,
    pub root: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TdCheck {
    /// The tree is not a tree or the bag count differs from its order.
    Tree,
    /// Some vertex lies in no bag.
    Cover,
    /// Some edge lies in no bag.
    Edge,
    /// The nodes holding some vertex do not induce a subtree.
    Subtree,
    /// The root bag differs from the boundary.
    RootBag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TdVerdict {
    pub failed: Option<TdCheck>,
    pub detail: String,
}

impl TdVerdict {
    fn ok() -> Self {
        TdVerdict { failed: None, detail: String::new() }
    }

    fn fail(c: TdCheck, detail: impl Into<String>) -> Self {
        TdVerdict { failed: Some(c), detail: detail.into() }
    }

    pub fn is_valid(&self) -> bool {
        self.failed.is_none()
    }
}

impl TreeDecomposition {
    pub fn new(tree: Graph, bags: Vec<Vec<usize>>, root: Option<usize>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { tree, bags, root }
    }

    /// One bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition::new(Graph::new(1), vec![(0..n).collect()], Some(0))
    }

    /// `max |χ(t)| − 1`; `-1` has no meaning here, so the empty decomposition has width 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn validate(&self, g: &Graph) -> TdVerdict {
        let k = self.tree.n();
        if k == 0 || k != self.bags.len() || !self.tree.is_connected() || self.tree.m() != k - 1 {
            return TdVerdict::fail(TdCheck::Tree, format!("{k} nodes, {} edges, {} bags", self.tree.m(), self.bags.len()));
        }
        let mut holders = vec![Vec::new(); g.n()];
        for (t, b) in self.bags.iter().enumerate() {
            for &v in b {
                if v >= g.n() {
                    return TdVerdict::fail(TdCheck::Cover, format!("bag {t} holds unknown vertex {v}"));
                }
                holders[v].push(t);
            }
        }
        if let Some(v) = (0..g.n()).find(|&v| holders[v].is_empty()) {
            return TdVerdict::fail(TdCheck::Cover, format!("vertex {v} is in no bag"));
        }
        for (u, v) in g.edges() {
            if !holders[u].iter().any(|t| self.bags[*t].binary_search(&v).is_ok()) {
                return TdVerdict::fail(TdCheck::Edge, format!("edge ({u},{v}) is in no bag"));
            }
        }
        for v in 0..g.n() {
            if !self.tree.is_connected_subset(&holders[v]) {
                return TdVerdict::fail(TdCheck::Subtree, format!("nodes holding {v} are disconnected"));
            }
        }
        TdVerdict::ok()
    }

    /// Validation as a decomposition of the boundaried graph with boundary `b`.
    pub fn validate_boundaried(&self, g: &Graph, b: &[usize]) -> TdVerdict {
        let v = self.validate(g);
        if !v.is_valid() {
            return v;
        }
        let mut b = b.to_vec();
        b.sort_unstable();
        match self.root {
            Some(r) if self.bags[r] == b => TdVerdict::ok(),
            Some(r) => TdVerdict::fail(TdCheck::RootBag, format!("root bag {:?}, boundary {b:?}", self.bags[r])),
            None => TdVerdict::fail(TdCheck::RootBag, "no root"),
        }
    }

    /// Parent of every node for `root` (`usize::MAX` at the root), and a
    /// BFS order from it.
    pub fn parents(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.tree.n()];
        let mut order = vec![root];
        let mut seen = vec![false; self.tree.n()];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &y in self.tree.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    order.push(y);
                }
            }
        }
        (parent, order)
    }

    fn rooted(&self) -> Result<usize> {
        self.root.ok_or_else(|| Error::InvalidArgument("decomposition has no root".into()))
    }

    pub fn is_binary(&self) -> bool {
        let Some(r) = self.root else { return false };
        let (parent, _) = self.parents(r);
        let mut kids = vec![0usize; self.tree.n()];
        for &p in &parent {
            if p != usize::MAX {
                kids[p] += 1;
            }
        }
        kids.iter().all(|&k| k <= 2)
    }

    /// `V(G_q)` for every node `q`: the union of the bags below it.
    pub fn below(&self) -> Result<Vec<Vec<usize>>> {
        let r = self.rooted()?;
        let (parent, order) = self.parents(r);
        let mut sets: Vec<Vec<usize>> = self.bags.clone();
        for &x in order.iter().rev() {
            let p = parent[x];
            if p != usize::MAX {
                let mut merged = sets[p].clone();
                merged.extend_from_slice(&sets[x]);
                merged.sort_unstable();
                merged.dedup();
                sets[p] = merged;
            }
        }
        Ok(sets)
    }

    /// Children with a bag as large as their parent's see strictly fewer vertices below them.
    pub fn strict_descent(&self) -> Result<Option<(usize, usize)>> {
        let r = self.rooted()?;
        let (parent, _) = self.parents(r);
        let below = self.below()?;
        Ok((0..self.tree.n()).find_map(|a| {
            let b = parent[a];
            (b != usize::MAX && self.bags[a].len() == self.bags[b].len() && below[a].len() >= below[b].len()).then_some((a, b))
        }))
    }

    /// `|V(G)| <= (width+1)·|V(T)|`.
    pub fn size_property(&self, g: &Graph) -> bool {
        g.n() <= (self.width() + 1) * self.nodes()
    }

    /// Subdivides every tree edge with a node holding the intersection of
    /// its two bags.
    pub fn with_adhesions(&self) -> TreeDecomposition {
        let mut bags = self.bags.clone();
        let mut edges = Vec::new();
        for (a, b) in self.tree.edges() {
            let mid = bags.len();
            bags.push(self.bags[a].iter().copied().filter(|v| self.bags[b].binary_search(v).is_ok()).collect());
            edges.push((a, mid));
            edges.push((mid, b));
        }
        let tree = Graph::from_edges(bags.len(), &edges).expect("subdivided tree");
        TreeDecomposition { tree, bags, root: self.root }
    }

    /// Contracts tree edges joining equal bags (`identical`) or a bag to a
    /// superset bag. The root, if any, survives.
    pub fn prune(&self) -> TreeDecomposition {
        self.contract_where(false)
    }

    pub fn dedup_adjacent(&self) -> TreeDecomposition {
        self.contract_where(true)
    }

    fn contract_where(&self, identical: bool) -> TreeDecomposition {
        let mut td = self.clone();
        loop {
            let found = td.tree.edges().into_iter().find_map(|(a, b)| {
                let sub = |x: usize, y: usize| {
                    (!identical || td.bags[x].len() == td.bags[y].len()) && td.bags[x].iter().all(|v| td.bags[y].binary_search(v).is_ok())
                };
                if sub(a, b) && td.root != Some(a) {
                    Some((a, b))
                } else if sub(b, a) && td.root != Some(b) {
                    Some((b, a))
                } else {
                    None
                }
            });
            let Some((gone, keep)) = found else { return td };
            let mut tree = td.tree.clone();
            for &y in td.tree.neighbors(gone) {
                if y != keep {
                    tree.add_edge(keep, y).expect("tree nodes");
                }
            }
            let (tree, map) = tree.delete_vertices(&[gone]);
            let bags = map.iter().map(|&o| td.bags[o].clone()).collect();
            let root = td.root.map(|r| map.iter().position(|&o| o == r).unwrap());
            td = TreeDecomposition { tree, bags, root };
        }
    }

    /// PACE `.td` text: `s td <bags> <max bag> <vertices>`, then `b` lines
    /// and tree edges, all 1-based.
    pub fn to_td(&self, n: usize) -> String {
        let mut s = format!("s td {} {} {n}\n", self.nodes(), self.width() + 1);
        for (i, b) in self.bags.iter().enumerate() {
            let _ = write!(s, "b {}", i + 1);
            for v in b {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
        for (a, b) in self.tree.edges() {
            let _ = writeln!(s, "{} {}", a + 1, b + 1);
        }
        s
    }

    /// Parses PACE `.td`; returns the decomposition and the vertex count.
    pub fn from_td(text: &str) -> Result<(TreeDecomposition, usize)> {
        let perr = |m: String| Error::Parse(m);
        let num = |t: &str| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
        let mut header = None;
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c')) {
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok[0] {
                "s" => {
                    if tok.len() != 5 || tok[1] != "td" {
                        return Err(perr(format!("bad header {line:?}")));
                    }
                    let k = num(tok[2])?;
                    header = Some((k, num(tok[4])?));
                    bags = vec![None; k];
                }
                "b" => {
                    let (k, n) = header.ok_or_else(|| perr("bag before header".into()))?;
                    let id = num(tok.get(1).ok_or_else(|| perr("bag without id".into()))?)?;
                    if id == 0 || id > k {
                        return Err(perr(format!("bag id {id} out of range")));
                    }
                    let mut b = Vec::new();
                    for t in &tok[2..] {
                        let v = num(t)?;
                        if v == 0 || v > n {
                            return Err(perr(format!("vertex {v} out of range")));
                        }
                        b.push(v - 1);
                    }
                    bags[id - 1] = Some(b);
                }
                _ => {
                    let (k, _) = header.ok_or_else(|| perr("edge before header".into()))?;
                    if tok.len() != 2 {
                        return Err(perr(format!("bad line {line:?}")));
                    }
                    let (a, b) = (num(tok[0])?, num(tok[1])?);
                    if a == 0 || b == 0 || a > k || b > k {
                        return Err(perr(format!("tree edge {a} {b} out of range")));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        let (k, n) = header.ok_or_else(|| perr("missing header".into()))?;
        let bags: Vec<Vec<usize>> = bags.into_iter().enumerate().map(|(i, b)| b.ok_or_else(|| perr(format!("bag {} missing", i + 1)))).collect::<Result<_>>()?;
        let tree = Graph::from_edges(k, &edges)?;
        Ok((TreeDecomposition::new(tree, bags, if k > 0 { Some(0) } else { None }), n))
    }
}

/// Vertex bound for [`treewidth_exact`].
pub const TREEWIDTH_MAX_VERTICES: usize = 16;

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(adj: &[u64], s: u64, v: usize) -> u64 {
    let mut reach = 1u64 << v;
    let mut frontier = reach;
    let mut out = 0u64;
    while frontier != 0 {
        let mut next = 0u64;
        for x in bits(frontier) {
            next |= adj[x];
        }
        next &= !reach;
        reach |= next;
        out |= next & !s;
        frontier = next & s;
    }
    out & !(1 << v)
}

/// Exact treewidth with an optimal decomposition, by dynamic programming
/// over the set of already eliminated vertices.
pub fn treewidth_exact(g: &Graph, budget: &Budget) -> Result<(usize, TreeDecomposition)> {
    let n = g.n();
    if n > TREEWIDTH_MAX_VERTICES {
        return Err(Error::ResourceLimit(format!("exact treewidth is limited to {TREEWIDTH_MAX_VERTICES} vertices")));
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::trivial(0)));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.mask(v)).collect();
    let full = (1usize << n) - 1;
    let mut tw = vec![u8::MAX; 1 << n];
    let mut last = vec![u8::MAX; 1 << n];
    tw[0] = 0;
    // Subsets in order of size so every predecessor is final.
    let mut by_size: Vec<usize> = (1..=full).collect();
    by_size.sort_by_key(|s| s.count_ones());
    for s in by_size {
        budget.tick()?;
        for v in bits(s as u64) {
            let prev = s & !(1 << v);
            let q = q_set(&adj, prev as u64, v).count_ones() as u8;
            let val = tw[prev].max(q);
            if val < tw[s] {
                tw[s] = val;
                last[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = from_elimination(g, &order)?;
    let w = tw[full] as usize;
    debug_assert_eq!(td.width(), w);
    Ok((w, td))
}

/// Decomposition of an elimination ordering: the bag of `v` is `v` with
/// its later neighbours in the fill-in graph.
pub fn from_elimination(g: &Graph, order: &[usize]) -> Result<TreeDecomposition> {
    let n = g.n();
    if order.len() != n || {
        let mut o = order.to_vec();
        o.sort_unstable();
        o != (0..n).collect::<Vec<_>>()
    } {
        return invalid("elimination order must be a permutation");
    }
    if n == 0 {
        return Ok(TreeDecomposition::trivial(0));
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut nb: Vec<std::collections::BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = nb[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for a in 0..later.len() {
            for b in a + 1..later.len() {
                nb[later[a]].insert(later[b]);
                nb[later[b]].insert(later[a]);
            }
        }
        if let Some(&p) = later.iter().min_by_key(|&&u| pos[u]) {
            parent[i] = pos[p];
        }
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    // Roots of the forest are chained together.
    let mut tree = Graph::new(n);
    let mut prev_root: Option<usize> = None;
    for i in 0..n {
        if parent[i] == usize::MAX {
            if let Some(r) = prev_root {
                tree.add_edge(r, i)?;
            }
            prev_root = Some(i);
        } else {
            tree.add_edge(i, parent[i])?;
        }
    }
    Ok(TreeDecomposition::new(tree, bags, prev_root))
}

/// Roots at `root` and splits every node with more than two children into
/// a chain of copies of its bag.
pub fn make_binary_rooted(td: &TreeDecomposition, root: usize) -> Result<TreeDecomposition> {
    if root >= td.nodes() {
        return invalid(format!("no node {root}"));
    }
    let (parent, order) = td.parents(root);
    let mut children = vec![Vec::new(); td.nodes()];
    for &x in &order {
        if parent[x] != usize::MAX {
            children[parent[x]].push(x);
        }
    }
    let mut bags = td.bags.clone();
    let mut edges = Vec::new();
    for &x in &order {
        let kids = &children[x];
        let mut host = x;
        for (i, &c) in kids.iter().enumerate() {
            let remaining = kids.len() - i;
            // Keep the last two children on the current copy.
            if remaining > 2 {
                edges.push((host, c));
                let copy = bags.len();
                bags.push(td.bags[x].clone());
                edges.push((host, copy));
                host = copy;
            } else {
                edges.push((host, c));
            }
        }
    }
    let tree = Graph::from_edges(bags.len(), &edges)?;
    Ok(TreeDecomposition { tree, bags, root: Some(root) })
}

/// Vertex-disjoint paths between `x` and `y`, by unit-capacity max-flow on
/// the split graph.
struct Flow {
    n: usize,
    head: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl Flow {
    fn new(n: usize) -> Self {
        Flow { n, head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn arc(&mut self, a: usize, b: usize, c: i32) {
        self.adj[a].push(self.head.len());
        self.head.push(b);
        self.cap.push(c);
        self.adj[b].push(self.head.len());
        self.head.push(a);
        self.cap.push(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.n];
        let mut q = VecDeque::from([s]);
        let mut seen = vec![false; self.n];
        seen[s] = true;
        while let Some(x) = q.pop_front() {
            for &e in &self.adj[x] {
                let y = self.head[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    q.push_back(y);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut y = t;
        while y != s {
            let e = via[y];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            y = self.head[e ^ 1];
        }
        true
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &e in &self.adj[x] {
                let y = self.head[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        seen
    }
}

/// Split network: `v_in = 2v`, `v_out = 2v+1`, source `2n`, sink `2n+1`.
/// Only vertex arcs are finite, so every minimum cut is a vertex set.
fn network(g: &Graph, x: &[usize], y: &[usize]) -> Flow {
    let n = g.n();
    let unbounded = n as i32 + 1;
    let mut f = Flow::new(2 * n + 2);
    for v in 0..n {
        f.arc(2 * v, 2 * v + 1, 1);
    }
    for (a, b) in g.edges() {
        f.arc(2 * a + 1, 2 * b, unbounded);
        f.arc(2 * b + 1, 2 * a, unbounded);
    }
    for &v in x {
        f.arc(2 * n, 2 * v, unbounded);
    }
    for &v in y {
        f.arc(2 * v + 1, 2 * n + 1, unbounded);
    }
    f
}

fn check_sets(g: &Graph, x: &[usize], y: &[usize]) -> Result<()> {
    if x.iter().chain(y).any(|&v| v >= g.n()) {
        return invalid("terminal outside the graph");
    }
    Ok(())
}

/// Maximum number of vertex-disjoint `x`–`y` paths.
pub fn max_disjoint_paths(g: &Graph, x: &[usize], y: &[usize]) -> Result<usize> {
    check_sets(g, x, y)?;
    let mut f = network(g, x, y);
    let (s, t) = (2 * g.n(), 2 * g.n() + 1);
    let mut k = 0;
    while f.augment(s, t) {
        k += 1;
    }
    Ok(k)
}

/// A smallest vertex set meeting every `x`–`y` path.
pub fn min_vertex_separator(g: &Graph, x: &[usize], y: &[usize]) -> Result<Vec<usize>> {
    check_sets(g, x, y)?;
    let mut f = network(g, x, y);
    let (s, t) = (2 * g.n(), 2 * g.n() + 1);
    while f.augment(s, t) {}
    let r = f.reachable(s);
    Ok((0..g.n()).filter(|&v| r[2 * v] && !r[2 * v + 1]).collect())
}

/// `s` pairwise vertex-disjoint paths, each from `x` to `y`, or `None` if
/// fewer exist. A vertex of `x ∩ y` is a path by itself.
pub fn disjoint_paths(g: &Graph, x: &[usize], y: &[usize], s: usize) -> Result<Option<Vec<Vec<usize>>>> {
    check_sets(g, x, y)?;
    let n = g.n();
    let mut f = network(g, x, y);
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut k = 0;
    while k < s && f.augment(src, snk) {
        k += 1;
    }
    if k < s {
        return Ok(None);
    }
    // Arcs carrying flow: forward arcs whose residual twin is positive.
    let used = |e: usize| e % 2 == 0 && f.cap[e ^ 1] > 0;
    let mut paths = Vec::new();
    for &e0 in &f.adj[src] {
        if !used(e0) {
            continue;
        }
        let mut path = Vec::new();
        let mut node = f.head[e0];
        loop {
            let v = node / 2;
            path.push(v);
            let out = 2 * v + 1;
            let next = f.adj[out].iter().copied().find(|&e| used(e)).expect("flow is conserved");
            let h = f.head[next];
            if h == snk {
                break;
            }
            node = h;
        }
        paths.push(path);
    }
    Ok(Some(paths))
}

/// Whether `paths` are `s` pairwise disjoint paths of `g` from `x` to `y`.
pub fn verify_paths(g: &Graph, x: &[usize], y: &[usize], paths: &[Vec<usize>], s: usize) -> bool {
    if paths.len() != s {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    paths.iter().all(|p| {
        !p.is_empty()
            && x.contains(&p[0])
            && y.contains(p.last().unwrap())
            && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
            && p.iter().all(|&v| seen.insert(v))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkedVerdict {
    pub linked: bool,
    /// `(u1, u2, s)`: an ancestor pair and path count where the property fails.
    pub witness: Option<(usize, usize, usize)>,
    pub pairs_checked: usize,
}

/// Linkedness: for every ancestor pair `u1 ≤ u2` with equal bag sizes and
/// every `s <= min(s_max, |χ(u1)|)`, some internal node of the path has a
/// bag smaller than `s`, or `s` disjoint paths join the two bags.
pub fn check_linked(td: &TreeDecomposition, g: &Graph, s_max: usize) -> Result<LinkedVerdict> {
    let r = td.rooted()?;
    let (parent, _) = td.parents(r);
    let mut pairs = Vec::new();
    for u2 in 0..td.nodes() {
        // Walks up from u2, tracking the smallest bag strictly between.
        let mut inner_min = usize::MAX;
        let mut u1 = parent[u2];
        let mut prev = u2;
        while u1 != usize::MAX {
            if prev != u2 {
                inner_min = inner_min.min(td.bags[prev].len());
            }
            if td.bags[u1].len() == td.bags[u2].len() {
                pairs.push((u1, u2, inner_min));
            }
            prev = u1;
            u1 = parent[u1];
        }
    }
    let results: Vec<Result<Option<(usize, usize, usize)>>> = pairs
        .par_iter()
        .map(|&(u1, u2, inner_min)| {
            let cap = s_max.min(td.bags[u1].len()).min(inner_min);
            if cap == 0 {
                return Ok(None);
            }
            let f = max_disjoint_paths(g, &td.bags[u1], &td.bags[u2])?;
            Ok((f < cap).then_some((u1, u2, f + 1)))
        })
        .collect();
    let mut witness = None;
    for w in results {
        if let Some(x) = w? {
            if witness.is_none_or(|old: (usize, usize, usize)| x < old) {
                witness = Some(x);
            }
        }
    }
    Ok(LinkedVerdict { linked: witness.is_none(), witness, pairs_checked: pairs.len() })
}

/// Best-effort improvement towards linkedness: merges repeated bags and
/// puts every adhesion on its own node, so that small separators show up
/// on tree paths. Gives no guarantee; the result must still be checked.
pub fn refine_linked(td: &TreeDecomposition, g: &Graph, s_max: usize) -> Result<(TreeDecomposition, LinkedVerdict)> {
    let before = check_linked(td, g, s_max)?;
    if before.linked {
        return Ok((td.clone(), before));
    }
    let refined = td.dedup_adjacent().with_adhesions().dedup_adjacent();
    let after = check_linked(&refined, g, s_max)?;
    Ok((refined, after))
}

/// For a word over `[r]` of length at least `m^r`: a letter `k` and a
/// contiguous span `[start, end)` whose letters are all at least `k` and
/// which contains `k` at least `m` times.
pub fn pigeonhole_subword(w: &[usize], r: usize, m: usize) -> Result<(usize, usize, usize)> {
    if r == 0 || m == 0 {
        return invalid("alphabet size and multiplicity must be positive");
    }
    if w.iter().any(|&c| c == 0 || c > r) {
        return invalid(format!("letters must lie in 1..={r}"));
    }
    let need = (m as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if (w.len() as u128) < need {
        return invalid(format!("word of length {} is shorter than {m}^{r}", w.len()));
    }
    Ok(subword_rec(w, 0, w.len(), 1, r, m))
}

/// Letters in `[lo, r]` on `w[a..b]`, with `b − a >= m^(r−lo+1)`.
fn subword_rec(w: &[usize], a: usize, b: usize, lo: usize, r: usize, m: usize) -> (usize, usize, usize) {
    let count = w[a..b].iter().filter(|&&c| c == lo).count();
    if count >= m || lo == r {
        return (lo, a, b);
    }
    // Fewer than m separators leave a segment of length at least m^(r−lo).
    let mut best = (a, a);
    let mut start = a;
    for i in a..=b {
        if i == b || w[i] == lo {
            if i - start > best.1 - best.0 {
                best = (start, i);
            }
            start = i + 1;
        }
    }
    subword_rec(w, best.0, best.1, lo + 1, r, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn tw(g: &Graph) -> usize {
        let (w, td) = treewidth_exact(g, &Budget::default()).unwrap();
        assert!(td.validate(g).is_valid());
        assert_eq!(td.width(), w);
        w
    }

    #[test]
    fn closed_forms() {
        assert_eq!(tw(&path(6)), 1);
        assert_eq!(tw(&cycle(7)), 2);
        assert_eq!(tw(&complete(5)), 4);
        assert_eq!(tw(&Graph::new(3)), 0);
        assert_eq!(tw(&grid(3, 3)), 3);
        assert_eq!(tw(&petersen()), 4);
    }

    #[test]
    fn validator_pinpoints_failures() {
        let g = path(3);
        let tree = path(2);
        let good = TreeDecomposition::new(tree.clone(), vec![vec![0, 1], vec![1, 2]], Some(0));
        assert!(good.validate(&g).is_valid());
        let miss = TreeDecomposition::new(tree.clone(), vec![vec![0, 1], vec![1]], Some(0));
        assert_eq!(miss.validate(&g).failed, Some(TdCheck::Cover));
        let edge = TreeDecomposition::new(tree.clone(), vec![vec![0, 1], vec![2]], Some(0));
        assert_eq!(edge.validate(&g).failed, Some(TdCheck::Edge));
        let split = TreeDecomposition::new(path(3), vec![vec![0, 1], vec![1, 2], vec![0]], Some(0));
        assert_eq!(split.validate(&g).failed, Some(TdCheck::Subtree));
        let cyc = TreeDecomposition::new(cycle(3), vec![vec![0, 1, 2]; 3], Some(0));
        assert_eq!(cyc.validate(&g).failed, Some(TdCheck::Tree));
        assert_eq!(good.validate_boundaried(&g, &[1, 0]).failed, None);
        assert_eq!(good.validate_boundaried(&g, &[2]).failed, Some(TdCheck::RootBag));
    }

    #[test]
    fn binary_rooting() {
        let g = star(5);
        let tree = star(5);
        let bags = (0..6).map(|i| if i == 0 { vec![0] } else { vec![0, i] }).collect();
        let td = TreeDecomposition::new(tree, bags, Some(0));
        assert!(td.validate(&g).is_valid());
        let b = make_binary_rooted(&td, 0).unwrap();
        assert!(b.validate(&g).is_valid());
        assert!(b.is_binary());
        assert_eq!(b.width(), td.width());
        assert!(b.nodes() > td.nodes());
        let p = from_elimination(&path(5), &[0, 1, 2, 3, 4]).unwrap();
        let pb = make_binary_rooted(&p, p.root.unwrap()).unwrap();
        assert_eq!(pb.bags, p.bags);
        assert!(pb.strict_descent().unwrap().is_none());
    }

    #[test]
    fn flow_examples() {
        let g = grid(4, 4);
        let left: Vec<usize> = (0..4).map(|y| 4 * y).collect();
        let right: Vec<usize> = (0..4).map(|y| 4 * y + 3).collect();
        let ps = disjoint_paths(&g, &left, &right, 4).unwrap().unwrap();
        assert!(verify_paths(&g, &left, &right, &ps, 4));
        assert!(disjoint_paths(&g, &left, &right, 5).unwrap().is_none());
        let same = disjoint_paths(&g, &left, &left, 4).unwrap().unwrap();
        assert!(same.iter().all(|p| p.len() == 1));
        let bowtie = Graph::from_edges(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(max_disjoint_paths(&bowtie, &[0, 1], &[3, 4]).unwrap(), 1);
        assert_eq!(min_vertex_separator(&bowtie, &[0, 1], &[3, 4]).unwrap(), vec![2]);
        // A terminal in both sets must itself be in the separator.
        let p = path(3);
        assert_eq!(min_vertex_separator(&p, &[0, 1], &[1, 2]).unwrap(), vec![1]);
        assert_eq!(min_vertex_separator(&p, &[1], &[1]).unwrap(), vec![1]);
    }

    #[test]
    fn linkedness() {
        // Edge bags alone are not linked: {0,1} and {3,4} are joined by one
        // path only. With the adhesions on their own nodes they are.
        let g = path(5);
        let td = from_elimination(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert!(!check_linked(&td, &g, 2).unwrap().linked);
        let (fixed, v) = refine_linked(&td, &g, 2).unwrap();
        assert!(v.linked);
        assert!(fixed.validate(&g).is_valid());
        // Two triangles joined by a cut vertex, with the cut vertex's bags
        // wrapped around a detour bag: equal-size bags {0,1,2} and {2,3,4}
        // can only be joined by one path.
        let bt = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let tree = path(2);
        let td = TreeDecomposition::new(tree, vec![vec![0, 1, 2], vec![2, 3, 4]], Some(0));
        let v = check_linked(&td, &bt, 3).unwrap();
        assert!(!v.linked);
        assert_eq!(v.witness, Some((0, 1, 2)));
        assert!(check_linked(&td, &bt, 1).unwrap().linked);
        let tree = path(3);
        let td = TreeDecomposition::new(tree, vec![vec![0, 1, 2], vec![2], vec![2, 3, 4]], Some(0));
        assert!(check_linked(&td, &bt, 3).unwrap().linked);
    }

    #[test]
    fn prune_and_io() {
        let g = cycle(5);
        let (_, td) = treewidth_exact(&g, &Budget::default()).unwrap();
        let p = td.prune();
        assert!(p.validate(&g).is_valid());
        assert!(p.nodes() <= td.nodes());
        assert!(p.size_property(&g));
        let (back, n) = TreeDecomposition::from_td(&p.to_td(5)).unwrap();
        assert_eq!(n, 5);
        assert_eq!(back.bags, p.bags);
        assert!(back.validate(&g).is_valid());
        assert!(TreeDecomposition::from_td("b 1 2").is_err());
    }

    #[test]
    fn pigeonhole() {
        assert_eq!(pigeonhole_subword(&[1, 1, 1], 1, 3).unwrap(), (1, 0, 3));
        let w: Vec<usize> = (0..16).map(|i| 1 + i % 2).collect();
        let (k, a, b) = pigeonhole_subword(&w, 2, 4).unwrap();
        assert!(w[a..b].iter().all(|&c| c >= k) && w[a..b].iter().filter(|&&c| c == k).count() >= 4);
        assert!(pigeonhole_subword(&w[..15], 2, 4).is_err());
        assert_eq!(pigeonhole_subword(&[2, 2, 2, 1, 1, 2, 2, 2, 2], 2, 3).unwrap(), (2, 5, 9));
    }
}
