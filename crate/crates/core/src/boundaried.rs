//! Boundaried graphs: gluing, boundaried minors, folios, bounded-context
//! equivalence, representatives, characteristic functions, augmented flaps
//! and palettes.
//!
//! A boundaried graph stores its boundary as a vertex list; `boundary[i]`
//! is the vertex with label `i+1`.
//!
//! The order `G1 ≤_h G2` quantifies over every compatible context. Here it
//! is replaced by [`BoundedOrder`], which quantifies over contexts with at
//! most `c` vertices only. The bounded relation can merge classes that the
//! unbounded one separates.

use crate::error::{invalid, Budget, Error, Result};
use crate::flatness::{classify_cells, CellClass, FlatnessCertificate};
use crate::graph::{canonical_form_with, from_graph6, to_graph6, CanonicalCode, Graph};
use crate::minor::is_minor;
use crate::obstruction::enumerate_graphs;
use crate::util::{bits, subsets_up_to, Combinations};
use crate::walls::Wall;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundariedGraph {
    pub graph: Graph,
    pub boundary: Vec<usize>,
}

/// Canonical code of a boundaried graph: isomorphisms must preserve labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryCode {
    pub t: usize,
    pub code: CanonicalCode,
}

impl BoundaryCode {
    pub fn to_hex(&self) -> String {
        format!("{}:{}", self.t, self.code.to_hex())
    }
}

impl BoundariedGraph {
    pub fn new(graph: Graph, boundary: Vec<usize>) -> Result<Self> {
        if boundary.iter().any(|&v| v >= graph.n()) {
            return invalid("boundary vertex out of range");
        }
        if boundary.iter().collect::<HashSet<_>>().len() != boundary.len() {
            return invalid("boundary repeats a vertex");
        }
        Ok(BoundariedGraph { graph, boundary })
    }

    /// The graph with its first `t` vertices as boundary, in order.
    pub fn with_prefix_boundary(graph: Graph, t: usize) -> Result<Self> {
        Self::new(graph, (0..t).collect())
    }

    pub fn t(&self) -> usize {
        self.boundary.len()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `max(|E|, |V ∖ B|)`.
    pub fn detail(&self) -> usize {
        self.graph.m().max(self.n() - self.t())
    }

    /// Label of `v`, 1-based.
    pub fn rho(&self, v: usize) -> Option<usize> {
        self.boundary.iter().position(|&b| b == v).map(|i| i + 1)
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.contains(&v)
    }

    /// Boundary edges as label-index pairs `(i, j)`, `i < j`, 0-based.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        let t = self.t();
        let mut out = Vec::new();
        for i in 0..t {
            for j in i + 1..t {
                if self.graph.has_edge(self.boundary[i], self.boundary[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `G ∖ S`; surviving boundary vertices keep their relative order.
    pub fn delete(&self, s: &[usize]) -> BoundariedGraph {
        let (g, keep) = self.graph.delete_vertices(s);
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let boundary = self.boundary.iter().filter(|&&b| new_id[b] != usize::MAX).map(|&b| new_id[b]).collect();
        BoundariedGraph { graph: g, boundary }
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<BoundariedGraph> {
        Ok(BoundariedGraph { graph: self.graph.delete_edge(u, v)?, boundary: self.boundary.clone() })
    }

    /// Contracts `uv`; a boundary endpoint prevails. Contracting two
    /// boundary vertices is not allowed.
    pub fn contract(&self, u: usize, v: usize) -> Result<BoundariedGraph> {
        if !self.graph.has_edge(u, v) {
            return invalid(format!("({u},{v}) is not an edge"));
        }
        let (keep, gone) = match (self.is_boundary(u), self.is_boundary(v)) {
            (true, true) => return invalid("cannot contract an edge between boundary vertices"),
            (false, true) => (v, u),
            _ => (u, v),
        };
        let mut g = self.graph.clone();
        for &w in self.graph.neighbors(gone) {
            if w != keep {
                g.add_edge(keep, w)?;
            }
        }
        let tmp = BoundariedGraph { graph: g, boundary: self.boundary.clone() };
        Ok(tmp.delete(&[gone]))
    }

    fn initial_cells(&self) -> Vec<Vec<usize>> {
        let mut cells: Vec<Vec<usize>> = self.boundary.iter().map(|&b| vec![b]).collect();
        cells.push((0..self.n()).filter(|&v| !self.is_boundary(v)).collect());
        cells
    }

    pub fn code(&self) -> BoundaryCode {
        BoundaryCode { t: self.t(), code: canonical_form_with(&self.graph, self.initial_cells()).code }
    }

    /// Canonically relabelled copy; its boundary is `0..t`.
    pub fn canonical(&self) -> BoundariedGraph {
        let f = canonical_form_with(&self.graph, self.initial_cells());
        BoundariedGraph { graph: f.apply(&self.graph), boundary: (0..self.t()).collect() }
    }

    /// `graph6|b1,b2,...`
    pub fn to_text(&self) -> String {
        let b: Vec<String> = self.boundary.iter().map(|v| v.to_string()).collect();
        format!("{}|{}", to_graph6(&self.graph), b.join(","))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let (g6, b) = s.trim().split_once('|').ok_or_else(|| Error::Parse("expected graph6|boundary".into()))?;
        let g = from_graph6(g6)?;
        let boundary = if b.is_empty() {
            Vec::new()
        } else {
            b.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string()))).collect::<Result<_>>()?
        };
        Self::new(g, boundary)
    }
}

/// `ρ2⁻¹∘ρ1` is an isomorphism between the boundary-induced subgraphs.
pub fn compatible(a: &BoundariedGraph, b: &BoundariedGraph) -> bool {
    a.t() == b.t() && a.pattern() == b.pattern()
}

/// `a ⊕ b`: `a` keeps its ids, the non-boundary vertices of `b` follow in
/// increasing order.
pub fn glue(a: &BoundariedGraph, b: &BoundariedGraph) -> Result<Graph> {
    if !compatible(a, b) {
        return invalid("boundaried graphs are not compatible");
    }
    let mut g = a.graph.clone();
    let mut id = vec![usize::MAX; b.n()];
    for (i, &v) in b.boundary.iter().enumerate() {
        id[v] = a.boundary[i];
    }
    for v in 0..b.n() {
        if id[v] == usize::MAX {
            id[v] = g.add_vertex();
        }
    }
    for (u, v) in b.graph.edges() {
        g.add_edge(id[u], id[v])?;
    }
    Ok(g)
}

pub fn boundaried_minor(h: &BoundariedGraph, g: &BoundariedGraph) -> Result<bool> {
    boundaried_minor_budget(h, g, &Budget::default())
}

/// Branch sets in `g` for every vertex of `h`: the set of the `i`-th
/// boundary vertex of `h` holds the `i`-th boundary vertex of `g` and no
/// other boundary vertex; other sets avoid the boundary.
pub fn boundaried_minor_budget(h: &BoundariedGraph, g: &BoundariedGraph, budget: &Budget) -> Result<bool> {
    if h.t() != g.t() {
        return invalid(format!("boundary sizes differ: {} vs {}", h.t(), g.t()));
    }
    if g.n() > 64 {
        return Err(Error::ResourceLimit("boundaried minor search supports at most 64 vertices".into()));
    }
    if h.n() > g.n() || h.graph.m() > g.graph.m() {
        return Ok(false);
    }
    let hn = h.n();
    let mut sets = vec![0u64; hn];
    for i in 0..g.t() {
        sets[h.boundary[i]] |= 1 << g.boundary[i];
    }
    // Free vertices of g in BFS order from the boundary.
    let mut order = Vec::new();
    let mut seen: u64 = g.boundary.iter().fold(0, |m, &b| m | 1 << b);
    let mut frontier: Vec<usize> = g.boundary.clone();
    while order.len() + g.t() < g.n() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in g.graph.neighbors(v) {
                if seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    order.push(u);
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            match (0..g.n()).find(|&v| seen >> v & 1 == 0) {
                Some(v) => {
                    seen |= 1 << v;
                    order.push(v);
                    next.push(v);
                }
                None => break,
            }
        }
        frontier = next;
    }
    let adj: Vec<u64> = (0..g.n()).map(|v| g.graph.mask(v)).collect();
    let hedges = h.graph.edges();
    let inner: Vec<usize> = (0..hn).filter(|&v| !h.is_boundary(v)).collect();
    fn connected(adj: &[u64], s: u64) -> bool {
        if s == 0 {
            return false;
        }
        let mut reach = 1u64 << s.trailing_zeros();
        loop {
            let mut next = reach;
            for v in bits(reach) {
                next |= adj[v] & s;
            }
            if next == reach {
                return reach == s;
            }
            reach = next;
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        order: &[usize],
        sets: &mut [u64],
        inner: &[usize],
        adj: &[u64],
        hedges: &[(usize, usize)],
        budget: &Budget,
    ) -> Result<bool> {
        budget.tick()?;
        let empty = inner.iter().filter(|&&x| sets[x] == 0).count();
        if empty > order.len() - i {
            return Ok(false);
        }
        if i == order.len() {
            if !sets.iter().all(|&s| connected(adj, s)) {
                return Ok(false);
            }
            let touches = |a: u64, b: u64| bits(a).any(|v| adj[v] & b != 0);
            return Ok(hedges.iter().all(|&(a, b)| touches(sets[a], sets[b])));
        }
        let v = order[i];
        for x in 0..sets.len() {
            sets[x] |= 1 << v;
            let ok = rec(i + 1, order, sets, inner, adj, hedges, budget)?;
            sets[x] &= !(1 << v);
            if ok {
                return Ok(true);
            }
        }
        rec(i + 1, order, sets, inner, adj, hedges, budget)
    }
    rec(0, &order, &mut sets, &inner, &adj, &hedges, budget)
}

/// Vertex bound for [`folio`].
pub const FOLIO_MAX_VERTICES: usize = 10;
/// Detail bound for [`folio`].
pub const FOLIO_MAX_DETAIL: usize = 4;

/// The `ℓ`-folio: canonical codes of the boundaried topological minors of
/// detail at most `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Folio {
    pub t: usize,
    pub ell: usize,
    pub members: BTreeSet<BoundaryCode>,
}

impl Folio {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn code_on(t_order: &[usize], edges: &[(usize, usize)], t: usize) -> BoundaryCode {
    let g = Graph::from_edges(t_order.len(), edges).expect("simple by construction");
    BoundariedGraph { graph: g, boundary: (0..t).collect() }.code()
}

/// Folio by enumerating branch sets `T ⊇ B` and sets of internally
/// disjoint paths between branch vertices.
pub fn folio(g: &BoundariedGraph, ell: usize) -> Result<Folio> {
    if g.n() > FOLIO_MAX_VERTICES || ell > FOLIO_MAX_DETAIL {
        return Err(Error::ResourceLimit(format!(
            "folios are computed for at most {FOLIO_MAX_VERTICES} vertices and detail {FOLIO_MAX_DETAIL}"
        )));
    }
    let n = g.n();
    let t = g.t();
    let adj: Vec<u64> = (0..n).map(|v| g.graph.mask(v)).collect();
    let inner: Vec<usize> = (0..n).filter(|&v| !g.is_boundary(v)).collect();
    let mut members = BTreeSet::new();
    for extra in subsets_up_to(inner.len(), ell) {
        let mut tv = g.boundary.clone();
        tv.extend(extra.iter().map(|&i| inner[i]));
        let tmask = tv.iter().fold(0u64, |m, &v| m | 1 << v);
        let free = ((1u64 << n) - 1) & !tmask;
        let mut pairs: Vec<((usize, usize), Vec<u64>)> = Vec::new();
        for i in 0..tv.len() {
            for j in i + 1..tv.len() {
                let ints = interiors(&adj, tv[i], tv[j], free);
                if !ints.is_empty() {
                    pairs.push(((i, j), ints));
                }
            }
        }
        let mut seen = HashSet::new();
        let mut chosen = Vec::new();
        choose_paths(&pairs, 0, 0, 0, ell, &mut chosen, &mut seen, &mut |edges| {
            members.insert(code_on(&tv, edges, t));
        });
    }
    Ok(Folio { t, ell, members })
}

/// Interior vertex masks of the `x`–`y` paths whose interiors lie in `free`.
fn interiors(adj: &[u64], x: usize, y: usize, free: u64) -> Vec<u64> {
    let mut out = HashSet::new();
    fn walk(adj: &[u64], cur: usize, y: usize, free: u64, used: u64, out: &mut HashSet<u64>) {
        if adj[cur] >> y & 1 == 1 {
            out.insert(used);
        }
        for u in bits(adj[cur] & free & !used) {
            walk(adj, u, y, free, used | 1 << u, out);
        }
    }
    walk(adj, x, y, free, 0, &mut out);
    let mut v: Vec<u64> = out.into_iter().collect();
    v.sort_unstable();
    v
}

#[allow(clippy::too_many_arguments)]
fn choose_paths(
    pairs: &[((usize, usize), Vec<u64>)],
    start: usize,
    used: u64,
    picked: u64,
    ell: usize,
    chosen: &mut Vec<(usize, usize)>,
    seen: &mut HashSet<(usize, u64, u64)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    emit(chosen);
    if chosen.len() == ell {
        return;
    }
    for p in start..pairs.len() {
        let bit = picked | 1 << p;
        for &m in &pairs[p].1 {
            if m & used != 0 || !seen.insert((p + 1, used | m, bit)) {
                continue;
            }
            chosen.push(pairs[p].0);
            choose_paths(pairs, p + 1, used | m, bit, ell, chosen, seen, emit);
            chosen.pop();
        }
    }
}

/// Vertex bound for [`folio_naive`].
pub const NAIVE_FOLIO_MAX_VERTICES: usize = 6;

/// Folio straight from the definition: every subgraph `M ⊇ B`, every
/// branch set `T` with the other vertices of degree two, dissolved.
/// Dissolutions that would create a parallel edge or a loop are skipped;
/// the same simple graph is reached from a smaller subgraph.
pub fn folio_naive(g: &BoundariedGraph, ell: usize) -> Result<Folio> {
    if g.n() > NAIVE_FOLIO_MAX_VERTICES || g.graph.m() > 15 {
        return Err(Error::ResourceLimit(format!("naive folio is limited to {NAIVE_FOLIO_MAX_VERTICES} vertices")));
    }
    let n = g.n();
    let t = g.t();
    let inner: Vec<usize> = (0..n).filter(|&v| !g.is_boundary(v)).collect();
    let mut members = BTreeSet::new();
    for um in 0u64..1 << inner.len() {
        let mut verts = g.boundary.clone();
        verts.extend(bits(um).map(|i| inner[i]));
        let inside: HashSet<usize> = verts.iter().copied().collect();
        let es: Vec<(usize, usize)> = g.graph.edges().into_iter().filter(|(a, b)| inside.contains(a) && inside.contains(b)).collect();
        for em in 0u64..1 << es.len() {
            let chosen: Vec<(usize, usize)> = bits(em).map(|i| es[i]).collect();
            let mut deg: HashMap<usize, usize> = HashMap::new();
            for &(a, b) in &chosen {
                *deg.entry(a).or_default() += 1;
                *deg.entry(b).or_default() += 1;
            }
            let extra: Vec<usize> = bits(um).map(|i| inner[i]).collect();
            let forced: Vec<usize> = extra.iter().copied().filter(|v| deg.get(v).copied().unwrap_or(0) != 2).collect();
            let optional: Vec<usize> = extra.iter().copied().filter(|v| deg.get(v).copied().unwrap_or(0) == 2).collect();
            for om in 0u64..1 << optional.len() {
                let mut tv = g.boundary.clone();
                let mut branch: Vec<usize> = forced.clone();
                branch.extend(bits(om).map(|i| optional[i]));
                branch.sort_unstable();
                tv.extend(branch);
                if tv.len() - t > ell {
                    continue;
                }
                if let Some(edges) = dissolve(&verts, &chosen, &tv) {
                    if edges.len() <= ell {
                        members.insert(code_on(&tv, &edges, t));
                    }
                }
            }
        }
    }
    Ok(Folio { t, ell, members })
}

/// Dissolves every vertex of `verts` outside `tv`; edges are returned in
/// positions of `tv`.
fn dissolve(verts: &[usize], edges: &[(usize, usize)], tv: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = verts.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &(a, b) in edges {
        adj.get_mut(&a)?.insert(b);
        adj.get_mut(&b)?.insert(a);
    }
    let branch: HashSet<usize> = tv.iter().copied().collect();
    for &v in verts {
        if branch.contains(&v) {
            continue;
        }
        let nb: Vec<usize> = adj[&v].iter().copied().collect();
        let [a, b] = nb[..] else { return None };
        if adj[&a].contains(&b) {
            return None;
        }
        adj.remove(&v);
        for (x, y) in [(a, b), (b, a)] {
            let s = adj.get_mut(&x)?;
            s.remove(&v);
            s.insert(y);
        }
    }
    let pos: HashMap<usize, usize> = tv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::new();
    for (&a, nb) in &adj {
        for &b in nb {
            if a < b {
                out.push((pos[&a], pos[&b]));
            }
        }
    }
    Some(out)
}

/// Cap on the context vertex bound `c`, and on `h`.
pub const MAX_CONTEXT: usize = 7;
pub const MAX_H: usize = 4;

/// Pattern-minor profile of `g` against every compatible context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub t: usize,
    pub pattern: Vec<(usize, usize)>,
    bits: Vec<u64>,
}

impl Signature {
    pub fn leq(&self, other: &Signature) -> bool {
        self.t == other.t && self.pattern == other.pattern && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// `G1 ≤ G2` when, for every compatible context `F` with at most `c`
/// vertices and every graph `H` of detail at most `h`, `H ≼ F⊕G1` implies
/// `H ≼ F⊕G2`.
pub struct BoundedOrder {
    pub h: usize,
    pub c: usize,
    patterns: Vec<Graph>,
    contexts: Mutex<HashMap<(usize, Vec<(usize, usize)>), Arc<Vec<BoundariedGraph>>>>,
}

impl std::fmt::Debug for BoundedOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BoundedOrder(h={}, c={})", self.h, self.c)
    }
}

/// Graphs of detail at most `h` with at least one vertex.
pub fn small_patterns(h: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=h {
        out.extend(enumerate_graphs(n)?.into_iter().filter(|g| g.m() <= h));
    }
    Ok(out)
}

impl BoundedOrder {
    pub fn new(h: usize, c: usize) -> Result<Self> {
        if h > MAX_H || c > MAX_CONTEXT {
            return Err(Error::ResourceLimit(format!("bounded order supports h <= {MAX_H} and c <= {MAX_CONTEXT}")));
        }
        Ok(BoundedOrder { h, c, patterns: small_patterns(h)?, contexts: Mutex::new(HashMap::new()) })
    }

    pub fn patterns(&self) -> &[Graph] {
        &self.patterns
    }

    /// Contexts for boundary size `t` and boundary pattern `p`, up to
    /// isomorphism, boundary `0..t`.
    pub fn contexts(&self, t: usize, p: &[(usize, usize)]) -> Result<Arc<Vec<BoundariedGraph>>> {
        let key = (t, p.to_vec());
        if let Some(c) = self.contexts.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for n in t..=self.c.max(t) {
            let free: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| b >= t || a >= t).collect();
            if free.len() > 20 {
                return Err(Error::ResourceLimit(format!("{} free context pairs", free.len())));
            }
            for m in 0u64..1 << free.len() {
                let mut edges: Vec<(usize, usize)> = p.to_vec();
                edges.extend(bits(m).map(|i| free[i]));
                let f = BoundariedGraph { graph: Graph::from_edges(n, &edges)?, boundary: (0..t).collect() };
                if seen.insert(f.code()) {
                    out.push(f);
                }
            }
        }
        let arc = Arc::new(out);
        self.contexts.lock().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    fn profile(&self, g: &Graph, out: &mut Vec<u64>, base: usize) -> Result<()> {
        for (i, h) in self.patterns.iter().enumerate() {
            if is_minor(h, g)?.is_some() {
                let k = base + i;
                out[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(())
    }

    pub fn signature(&self, g: &BoundariedGraph) -> Result<Signature> {
        let pattern = g.pattern();
        let ctx = self.contexts(g.t(), &pattern)?;
        let p = self.patterns.len();
        let mut bits = vec![0u64; (ctx.len() * p).div_ceil(64)];
        for (j, f) in ctx.iter().enumerate() {
            self.profile(&glue(f, g)?, &mut bits, j * p)?;
        }
        Ok(Signature { t: g.t(), pattern, bits })
    }

    pub fn leq(&self, a: &BoundariedGraph, b: &BoundariedGraph) -> Result<bool> {
        if !compatible(a, b) {
            return Ok(false);
        }
        Ok(self.signature(a)?.leq(&self.signature(b)?))
    }
}

/// Bounded surrogate of `g1 ≤_h g2` over contexts with at most `c` vertices.
pub fn leq_h(g1: &BoundariedGraph, g2: &BoundariedGraph, h: usize, c: usize) -> Result<bool> {
    BoundedOrder::new(h, c)?.leq(g1, g2)
}

/// Every boundaried graph with boundary `0..t` and at most `max_n`
/// vertices, up to isomorphism.
pub fn all_boundaried(t: usize, max_n: usize) -> Result<Vec<BoundariedGraph>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in t..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        if pairs.len() > 21 {
            return Err(Error::ResourceLimit(format!("{n}-vertex boundaried graphs are too many to list")));
        }
        for m in 0u64..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = bits(m).map(|i| pairs[i]).collect();
            let g = BoundariedGraph { graph: Graph::from_edges(n, &edges)?, boundary: (0..t).collect() };
            if seen.insert(g.code()) {
                out.push(g.canonical());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Representative {
    pub graph: BoundariedGraph,
    pub code: BoundaryCode,
    /// Members of the class among the enumerated graphs.
    pub class_size: usize,
    pub signature: Signature,
}

/// Class representatives for boundary sizes `0..=t`.
#[derive(Clone, Debug)]
pub struct RepresentativeSet {
    pub t: usize,
    pub h: usize,
    pub c: usize,
    pub size_bound: usize,
    /// `classes[s]`: representatives with boundary size `s`.
    pub classes: Vec<Vec<Representative>>,
    pub order: Arc<BoundedOrder>,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    graph6: String,
    boundary: Vec<usize>,
    code: String,
    class_size: usize,
}

#[derive(Serialize, Deserialize)]
struct RepSetJson {
    t: usize,
    h: usize,
    c: usize,
    size_bound: usize,
    classes: Vec<Vec<RepJson>>,
}

/// Enumerates all boundaried graphs with boundary size up to `t` and at
/// most `size_bound` vertices and groups them by bounded equivalence.
/// Each class is represented by a member with fewest vertices, ties broken
/// by least canonical code.
pub fn representatives(t: usize, h: usize, size_bound: usize, c: usize) -> Result<RepresentativeSet> {
    if t > 3 || h > 3 || size_bound > 6 {
        return Err(Error::ResourceLimit("representatives are built for t <= 3, h <= 3, size bound <= 6".into()));
    }
    let order = Arc::new(BoundedOrder::new(h, c)?);
    let mut classes = Vec::new();
    for s in 0..=t {
        let all = all_boundaried(s, size_bound.max(s))?;
        let sigs: Vec<Result<Signature>> = all.par_iter().map(|g| order.signature(g)).collect();
        let mut groups: HashMap<Signature, Vec<usize>> = HashMap::new();
        for (i, sg) in sigs.into_iter().enumerate() {
            groups.entry(sg?).or_default().push(i);
        }
        let mut reps: Vec<Representative> = groups
            .into_iter()
            .map(|(signature, members)| {
                let best = members.iter().copied().min_by_key(|&i| (all[i].n(), all[i].code())).unwrap();
                Representative { graph: all[best].clone(), code: all[best].code(), class_size: members.len(), signature }
            })
            .collect();
        reps.sort_by(|a, b| (a.graph.n(), &a.code).cmp(&(b.graph.n(), &b.code)));
        classes.push(reps);
    }
    Ok(RepresentativeSet { t, h, c, size_bound, classes, order })
}

impl RepresentativeSet {
    /// `|P_{t,h}|`: pairs `(I, R)` with `I ⊆ [t]` and `R` a `(t-|I|)`-representative.
    pub fn pair_count(&self, t: usize) -> usize {
        (0..=t).map(|i| crate::util::binomial(t, i) as usize * self.classes[t - i].len()).sum()
    }

    /// Index of the class of `g`, if its signature matches a representative.
    pub fn class_of(&self, g: &BoundariedGraph) -> Result<Option<usize>> {
        let sig = self.order.signature(g)?;
        Ok(self.classes.get(g.t()).and_then(|c| c.iter().position(|r| r.signature == sig)))
    }

    pub fn to_json(&self) -> String {
        let j = RepSetJson {
            t: self.t,
            h: self.h,
            c: self.c,
            size_bound: self.size_bound,
            classes: self
                .classes
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|r| RepJson {
                            graph6: to_graph6(&r.graph.graph),
                            boundary: r.graph.boundary.clone(),
                            code: r.code.to_hex(),
                            class_size: r.class_size,
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("serialisable")
    }

    /// Reads a table and recomputes the signatures; a stored code that
    /// does not match its graph is a parse error.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: RepSetJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let order = Arc::new(BoundedOrder::new(j.h, j.c)?);
        let mut classes = Vec::new();
        for c in j.classes {
            let mut reps = Vec::new();
            for r in c {
                let graph = BoundariedGraph::new(from_graph6(&r.graph6)?, r.boundary)?;
                let code = graph.code();
                if code.to_hex() != r.code {
                    return Err(Error::Parse(format!("stored code {} does not match its graph", r.code)));
                }
                let signature = order.signature(&graph)?;
                reps.push(Representative { graph, code, class_size: r.class_size, signature });
            }
            classes.push(reps);
        }
        Ok(RepresentativeSet { t: j.t, h: j.h, c: j.c, size_bound: j.size_bound, classes, order })
    }
}

/// `(k,h)`-characteristic: for each `(I, R)`, the least `|S| <= k` with
/// `ρ(S∩B) = I` and `G∖S ≤ R`, or `k+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Characteristic {
    pub k: usize,
    pub h: usize,
    pub t: usize,
    /// `(I, representative code)` in ascending `I` (by mask), then table order.
    pub keys: Vec<(Vec<usize>, BoundaryCode)>,
    pub values: Vec<usize>,
}

impl Characteristic {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("I,representative,value\n");
        for ((i, r), v) in self.keys.iter().zip(&self.values) {
            let set = if i.is_empty() { "-".to_string() } else { i.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";") };
            s += &format!("{set},{},{v}\n", r.to_hex());
        }
        s
    }

    pub fn leq(&self, other: &Characteristic) -> bool {
        self.keys == other.keys && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

pub fn characteristic(g: &BoundariedGraph, k: usize, h: usize, reps: &RepresentativeSet) -> Result<Characteristic> {
    if h != reps.h {
        return invalid(format!("representatives were built for h={}, not {h}", reps.h));
    }
    let t = g.t();
    if t > reps.t {
        return invalid(format!("representatives cover boundary sizes up to {}, graph has {t}", reps.t));
    }
    let mut keys = Vec::new();
    let mut index: HashMap<(u64, usize), usize> = HashMap::new();
    for im in 0u64..1 << t {
        let size = im.count_ones() as usize;
        for (ri, r) in reps.classes[t - size].iter().enumerate() {
            index.insert((im, ri), keys.len());
            keys.push((bits(im).map(|i| i + 1).collect(), r.code.clone()));
        }
    }
    let subsets: Vec<Vec<usize>> = subsets_up_to(g.n(), k).collect();
    let found: Vec<Result<Vec<(usize, usize)>>> = subsets
        .par_iter()
        .map(|s| {
            let im = s.iter().filter_map(|&v| g.rho(v)).fold(0u64, |m, l| m | 1 << (l - 1));
            let rest = g.delete(s);
            let sig = reps.order.signature(&rest)?;
            let mut hits = Vec::new();
            for (ri, r) in reps.classes[rest.t()].iter().enumerate() {
                if sig.leq(&r.signature) {
                    hits.push((index[&(im, ri)], s.len()));
                }
            }
            Ok(hits)
        })
        .collect();
    let mut values = vec![k + 1; keys.len()];
    for f in found {
        for (i, size) in f? {
            values[i] = values[i].min(size);
        }
    }
    Ok(Characteristic { k, h, t, keys, values })
}

/// First `i` (1-based) with `v_i = v_{i+1}`.
pub fn first_repeat<T: PartialEq>(vs: &[T]) -> Option<usize> {
    vs.windows(2).position(|w| w[0] == w[1]).map(|i| i + 1)
}

/// Whether `v_i <= v_j` componentwise for all `i < j`.
pub fn is_monotone(vs: &[Vec<usize>]) -> bool {
    vs.windows(2).all(|w| w[0].len() == w[1].len() && w[0].iter().zip(&w[1]).all(|(a, b)| a <= b))
}

/// Chain length guaranteeing a repeat: `(k+2)·|P_{t,h}| + 1`.
pub fn repeat_length(k: usize, pairs: usize) -> usize {
    (k + 2) * pairs + 1
}

/// 1-based `i` with equal characteristics at positions `i` and `i+1` of a
/// boundaried-minor chain.
pub fn find_repeat(chain: &[BoundariedGraph], k: usize, h: usize, reps: &RepresentativeSet) -> Result<usize> {
    let chars: Vec<Characteristic> = chain.iter().map(|g| characteristic(g, k, h, reps)).collect::<Result<_>>()?;
    if let Some(i) = first_repeat(&chars) {
        return Ok(i);
    }
    let need = chain.first().map(|g| repeat_length(k, reps.pair_count(g.t()))).unwrap_or(1);
    Err(Error::NotFound(format!("no repeated characteristic in a chain of {} (a repeat is forced from length {need})", chain.len())))
}

/// A chain `G_1 ≼ ... ≼ G_len` of `t`-boundaried graphs ending in a random
/// graph on `n` vertices, each step one deletion or contraction. Edges
/// between boundary vertices are never touched and no contraction creates
/// one, so all members are compatible with each other.
pub fn random_minor_chain<R: Rng>(t: usize, n: usize, p: f64, len: usize, rng: &mut R) -> Result<Vec<BoundariedGraph>> {
    if t > n {
        return invalid("boundary larger than the graph");
    }
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b)?;
            }
        }
    }
    let mut cur = BoundariedGraph::with_prefix_boundary(g, t)?;
    let mut chain = vec![cur.clone()];
    while chain.len() < len {
        let mut moves: Vec<u8> = Vec::new();
        if cur.n() > cur.t() {
            moves.push(0);
        }
        let deletable: Vec<(usize, usize)> =
            cur.graph.edges().into_iter().filter(|&(a, b)| !(cur.is_boundary(a) && cur.is_boundary(b))).collect();
        if !deletable.is_empty() {
            moves.push(1);
        }
        let contractible: Vec<(usize, usize)> = deletable
            .iter()
            .copied()
            .filter(|&(a, b)| cur.contract(a, b).map(|c| c.pattern() == cur.pattern()).unwrap_or(false))
            .collect();
        if !contractible.is_empty() {
            moves.push(2);
        }
        let Some(&m) = moves.choose(rng) else { break };
        cur = match m {
            0 => {
                let inner: Vec<usize> = (0..cur.n()).filter(|&v| !cur.is_boundary(v)).collect();
                cur.delete(&[*inner.choose(rng).unwrap()])
            }
            1 => {
                let (a, b) = *deletable.choose(rng).unwrap();
                cur.delete_edge(a, b)?
            }
            _ => {
                let (a, b) = *contractible.choose(rng).unwrap();
                cur.contract(a, b)?
            }
        };
        chain.push(cur.clone());
    }
    chain.reverse();
    Ok(chain)
}

/// `F^Ã`: the flap of `cell` with the apex set `apex` attached. The
/// boundary is `apex` in the given order, then the flap's base in the order
/// `omega` (a rotation of the cell's cyclic order when the base has three
/// vertices; by default the rotation starting at the least vertex).
///
/// `cert` must be a certificate for `g − apex` in the ids of `g`. The
/// underlying graph is the flap subgraph, `g[apex]`, and the edges between
/// the apex set and the flap's vertices.
pub fn augmented_flap(
    g: &Graph,
    cert: &FlatnessCertificate,
    cell: usize,
    apex: &[usize],
    omega: Option<&[usize]>,
) -> Result<BoundariedGraph> {
    let r = &cert.rendition;
    let Some(flap) = r.sigma.get(cell) else {
        return invalid(format!("no cell {cell}"));
    };
    let base: Vec<usize> = r.painting.cells[cell].iter().map(|&x| r.pi[x]).collect();
    let order: Vec<usize> = match omega {
        Some(o) => {
            let mut a = o.to_vec();
            let mut b = base.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return invalid("omega must list the flap base");
            }
            if base.len() == 3 {
                let s = base.iter().position(|&v| v == o[0]).unwrap();
                if (0..3).any(|i| base[(s + i) % 3] != o[i]) {
                    return invalid("omega reverses the cell's cyclic order");
                }
            }
            o.to_vec()
        }
        None if base.len() == 3 => {
            let s = (0..3).min_by_key(|&i| base[i]).unwrap();
            (0..3).map(|i| base[(s + i) % 3]).collect()
        }
        None => {
            let mut b = base.clone();
            b.sort_unstable();
            b
        }
    };
    let fv: HashSet<usize> = flap.vertices.iter().copied().collect();
    if apex.iter().any(|a| fv.contains(a) || *a >= g.n()) {
        return invalid("apex vertices must lie outside the flap");
    }
    let mut verts: Vec<usize> = apex.to_vec();
    verts.extend(order.iter().copied());
    let mut rest: Vec<usize> = flap.vertices.iter().copied().filter(|v| !order.contains(v)).collect();
    rest.sort_unstable();
    verts.extend(rest);
    let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Graph::new(verts.len());
    for &(a, b) in &flap.edges {
        out.add_edge(pos[&a], pos[&b])?;
    }
    for (i, &a) in apex.iter().enumerate() {
        for &u in g.neighbors(a) {
            if let Some(&j) = pos.get(&u) {
                if j != i {
                    out.add_edge(i, j)?;
                }
            }
        }
    }
    BoundariedGraph::with_prefix_boundary(out, apex.len() + order.len())
}

/// `(Ã, ℓ)`-palette of `cycle`: the folios of the augmented flaps of its influence.
pub fn palette(g: &Graph, w: &Wall, cert: &FlatnessCertificate, cycle: &[usize], apex: &[usize], ell: usize) -> Result<BTreeSet<Folio>> {
    let cls = classify_cells(g, w, cert, cycle)?;
    let mut out = BTreeSet::new();
    for c in (0..cls.class.len()).filter(|&c| cls.class[c] != CellClass::External) {
        out.insert(folio(&augmented_flap(g, cert, c, apex, None)?, ell)?);
    }
    Ok(out)
}

/// Bricks of `w` disjoint from its perimeter.
pub fn internal_bricks(w: &Wall) -> Vec<Vec<usize>> {
    let perim: HashSet<usize> = w.perimeter().into_iter().collect();
    w.bricks().into_iter().filter(|b| b.iter().all(|v| !perim.contains(v))).collect()
}

/// Every internal brick has the same `(Ã, ℓ)`-palette, for every `Ã` in `family`.
pub fn is_homogeneous(g: &Graph, w: &Wall, cert: &FlatnessCertificate, family: &[Vec<usize>], ell: usize) -> Result<bool> {
    let bricks = internal_bricks(w);
    for apex in family {
        let mut folios: HashMap<usize, Folio> = HashMap::new();
        let mut first: Option<BTreeSet<Folio>> = None;
        for b in &bricks {
            let cls = classify_cells(g, w, cert, b)?;
            let mut pal = BTreeSet::new();
            for c in (0..cls.class.len()).filter(|&c| cls.class[c] != CellClass::External) {
                if !folios.contains_key(&c) {
                    folios.insert(c, folio(&augmented_flap(g, cert, c, apex, None)?, ell)?);
                }
                pal.insert(folios[&c].clone());
            }
            match &first {
                None => first = Some(pal),
                Some(f) if *f != pal => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// All `t`-subsets of the apex set, as used for homogeneity families.
pub fn apex_subsets(apex: &[usize], t: usize) -> Vec<Vec<usize>> {
    Combinations::new(apex.len(), t).map(|c| c.into_iter().map(|i| apex[i]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::graph::{is_isomorphic, to_graph6};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bg(g: Graph, t: usize) -> BoundariedGraph {
        BoundariedGraph::with_prefix_boundary(g, t).unwrap()
    }

    #[test]
    fn glue_examples() {
        let k2 = bg(complete(2), 2);
        let glued = glue(&k2, &k2).unwrap();
        assert_eq!((glued.n(), glued.m()), (2, 1));
        let p = bg(path(4), 2);
        let only = bg(Graph::from_edges(2, &[(0, 1)]).unwrap(), 2);
        assert!(is_isomorphic(&glue(&only, &p).unwrap(), &path(4)));
        assert!(glue(&bg(Graph::new(2), 2), &k2).is_err());
        let tri = bg(complete(3), 1);
        assert!(is_isomorphic(&glue(&tri, &bg(path(2), 1)).unwrap(), &glue(&bg(path(2), 1), &tri).unwrap()));
    }

    #[test]
    fn contraction_keeps_boundary() {
        let g = BoundariedGraph::new(path(3), vec![2]).unwrap();
        let c = g.contract(1, 2).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.t(), 1);
        assert_eq!(c.graph.degree(c.boundary[0]), 1);
        assert!(bg(complete(2), 2).contract(0, 1).is_err());
    }

    #[test]
    fn boundaried_minor_examples() {
        let g = bg(cycle(5), 2);
        assert!(boundaried_minor(&g, &g).unwrap());
        assert!(boundaried_minor(&g.delete(&[3]), &g).unwrap());
        assert!(boundaried_minor(&g.contract(2, 3).unwrap(), &g).unwrap());
        assert!(boundaried_minor(&bg(path(2), 1), &g).is_err());
        // Swapping boundary labels is not an isomorphism of boundaried graphs.
        let asym = bg(Graph::from_edges(3, &[(0, 2)]).unwrap(), 2);
        let swapped = BoundariedGraph::new(asym.graph.clone(), vec![1, 0]).unwrap();
        assert!(!boundaried_minor(&swapped, &asym).unwrap());
        assert_ne!(asym.code(), swapped.code());
    }

    #[test]
    fn folio_examples() {
        let single = bg(Graph::new(1), 1);
        let f = folio(&single, 1).unwrap();
        assert_eq!(f.len(), 1);
        let f2 = folio(&bg(path(2), 1), 1).unwrap();
        assert_eq!(f2.len(), 3, "vertex alone, plus isolated vertex, plus pendant edge");
        let tri = bg(complete(3), 1);
        assert_eq!(folio(&tri, 3).unwrap(), folio_naive(&tri, 3).unwrap());
        let sub = bg(path(3), 1);
        assert!(folio(&sub, 3).unwrap().members.is_subset(&folio(&tri, 3).unwrap().members));
    }

    #[test]
    fn folio_matches_naive_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let t = rng.gen_range(0..=n.min(2));
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let b = bg(g, t);
            for ell in 1..=3 {
                assert_eq!(folio(&b, ell).unwrap(), folio_naive(&b, ell).unwrap(), "{} t={t} ell={ell}", to_graph6(&b.graph));
            }
        }
    }

    #[test]
    fn bounded_order_examples() {
        let g = bg(cycle(4), 2);
        assert!(leq_h(&g, &g, 2, 3).unwrap());
        let minor = g.delete(&[3]);
        assert!(leq_h(&minor, &g, 2, 3).unwrap());
        let big = bg(complete(3), 1);
        let small = bg(Graph::new(1), 1);
        assert!(!leq_h(&big, &small, 3, 2).unwrap());
        assert!(leq_h(&small, &big, 3, 2).unwrap());
    }

    #[test]
    fn characteristic_basics() {
        let reps = representatives(2, 2, 3, 3).unwrap();
        let empty = bg(Graph::new(2), 2);
        let ch = characteristic(&empty, 1, 2, &reps).unwrap();
        let own = reps.class_of(&empty).unwrap().unwrap();
        let key = (Vec::new(), reps.classes[2][own].code.clone());
        let at = ch.keys.iter().position(|k| *k == key).unwrap();
        assert_eq!(ch.values[at], 0);
        assert_eq!(ch.keys.len(), reps.pair_count(2));
        let csv = ch.to_csv();
        assert_eq!(csv.lines().count(), ch.keys.len() + 1);
        let back = RepresentativeSet::from_json(&reps.to_json()).unwrap();
        assert_eq!(characteristic(&empty, 1, 2, &back).unwrap(), ch);
    }

    #[test]
    fn chains_are_monotone_and_repeat() {
        let reps = representatives(2, 2, 3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let chain = random_minor_chain(2, 6, 0.5, 5, &mut rng).unwrap();
            for w in chain.windows(2) {
                assert!(compatible(&w[0], &w[1]));
                assert!(boundaried_minor(&w[0], &w[1]).unwrap());
            }
            let chars: Vec<Vec<usize>> = chain.iter().map(|g| characteristic(g, 1, 2, &reps).unwrap().values).collect();
            assert!(is_monotone(&chars));
            if let Ok(i) = find_repeat(&chain, 1, 2, &reps) {
                assert_eq!(chars[i - 1], chars[i]);
            }
        }
        let constant = vec![bg(path(3), 2); 3];
        assert_eq!(find_repeat(&constant, 1, 2, &reps).unwrap(), 1);
    }

    #[test]
    fn pigeonhole_repeat() {
        // k+2 values per coordinate: strictly growing chains have length at
        // most (k+1)·y + 1, so padding to (k+2)·y + 1 forces a repeat.
        let (k, y) = (2usize, 3usize);
        let mut vs: Vec<Vec<usize>> = Vec::new();
        let mut cur = vec![0; y];
        vs.push(cur.clone());
        for c in 0..y {
            for _ in 0..=k {
                cur[c] += 1;
                vs.push(cur.clone());
            }
        }
        assert!(first_repeat(&vs).is_none());
        while vs.len() < repeat_length(k, y) {
            vs.push(cur.clone());
        }
        assert!(is_monotone(&vs));
        assert!(first_repeat(&vs).is_some());
    }

    #[test]
    fn text_round_trip() {
        let g = BoundariedGraph::new(petersen(), vec![3, 1, 4]).unwrap();
        let back = BoundariedGraph::from_text(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert!(BoundariedGraph::from_text("nonsense").is_err());
    }

    fn fixture(r: usize, sp: f64, fp: f64, seed: u64) -> (Graph, Wall, FlatnessCertificate) {
        let d = crate::flatness::plane_fixture(r, sp, fp, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let w = d.wall().unwrap();
        (d.graph, w, d.certificate)
    }

    #[test]
    fn trivial_flaps_are_homogeneous() {
        let (g, w, c) = fixture(5, 0.0, 0.0, 1);
        assert!(!internal_bricks(&w).is_empty());
        assert!(is_homogeneous(&g, &w, &c, &[vec![]], 2).unwrap());
        let f = augmented_flap(&g, &c, 0, &[], None).unwrap();
        assert_eq!((f.t(), f.graph.m()), (2, 1));
    }

    #[test]
    fn apex_edge_breaks_homogeneity() {
        let (mut g, w, c) = fixture(5, 0.0, 0.0, 2);
        let apex = g.add_vertex();
        let brick = &internal_bricks(&w)[0];
        g.add_edge(apex, brick[0]).unwrap();
        assert!(is_homogeneous(&g, &w, &c, &[vec![]], 2).unwrap());
        assert!(!is_homogeneous(&g, &w, &c, &[vec![apex]], 2).unwrap());
        let pal = palette(&g, &w, &c, brick, &[apex], 2).unwrap();
        let other = internal_bricks(&w).into_iter().find(|b| !b.contains(&brick[0])).unwrap();
        assert_ne!(pal, palette(&g, &w, &c, &other, &[apex], 2).unwrap());
    }

    #[test]
    fn homogeneity_survives_tilts() {
        let (mut g, w, c) = fixture(7, 0.0, 0.0, 3);
        let apex = g.add_vertex();
        for v in w.vertices() {
            g.add_edge(apex, v).unwrap();
        }
        let family = vec![vec![], vec![apex]];
        let base = {
            let mut h = g.clone();
            for v in w.vertices() {
                h.remove_edge(apex, v);
            }
            h
        };
        assert!(is_homogeneous(&g, &w, &c, &family, 2).unwrap());
        let mut plain = base.clone();
        plain.remove_edge(apex, 0);
        let sub = w.central_subwall(5).unwrap();
        let cut = g.delete_vertices(&[apex]).0;
        let _ = plain;
        let t = crate::flatness::compute_tilt(&cut, &w, &c, &sub).unwrap();
        assert!(is_homogeneous(&g, &t.wall, &t.certificate, &family, 2).unwrap());
    }
}
