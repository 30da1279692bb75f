//! Simple undirected graphs over contiguous ids `0..n`.
//!
//! Every mutation returns a new graph. Deleting vertices compacts ids by
//! shifting higher ids down, so relative order is preserved; helpers that
//! delete return the new-to-old id map.

mod canon;
mod io;
pub mod named;
mod planar;
mod witness;

pub use canon::{canonical_form, canonical_form_with, canonical_code, is_isomorphic, CanonicalCode, CanonicalForm};
pub use io::{from_graph6, from_json, parse_graph, to_graph6, to_json, GraphJson};
pub use planar::{apex_number, apex_number_with_budget, is_planar, planar_embedding, RotationSystem};
pub use witness::ContractionWitness;

use crate::error::{invalid, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    /// Neighbour masks, kept only while `n <= 64`.
    bits: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            bits: if n <= 64 { vec![0; n] } else { Vec::new() },
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u,v}`. Returns `Ok(false)` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return invalid(format!("edge ({u},{v}) out of range for n={}", self.n));
        }
        if u == v {
            return invalid(format!("self-loop at {u}"));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                if !self.bits.is_empty() {
                    self.bits[u] |= 1 << v;
                    self.bits[v] |= 1 << u;
                }
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                if !self.bits.is_empty() {
                    self.bits[u] &= !(1 << v);
                    self.bits[v] &= !(1 << u);
                }
                true
            }
            Err(_) => false,
        }
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.adj.push(Vec::new());
        if self.n <= 64 && (self.bits.len() + 1 == self.n) {
            self.bits.push(0);
        } else {
            self.bits.clear();
        }
        self.n - 1
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        if !self.bits.is_empty() {
            self.bits[u] >> v & 1 == 1
        } else {
            self.adj[u].binary_search(&v).is_ok()
        }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbour mask of `v`. Only valid for graphs with at most 64 vertices.
    #[inline]
    pub fn mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.bits[v]
    }

    pub fn is_small(&self) -> bool {
        self.n <= 64
    }

    /// Edges as `(u,v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// `max(|E|, |V|)`.
    pub fn detail(&self) -> usize {
        self.m().max(self.n)
    }

    /// Subgraph induced by `keep`, in the order given. Returns the graph and
    /// the new-to-old id map (which is `keep` itself).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = pos[u];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    /// Deletes the vertices in `del`. Returns the graph and the new-to-old map.
    pub fn delete_vertices(&self, del: &[usize]) -> (Graph, Vec<usize>) {
        let mut gone = vec![false; self.n];
        for &v in del {
            if v < self.n {
                gone[v] = true;
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        (self.induced(&keep), keep)
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range"));
        }
        Ok(self.delete_vertices(&[v]).0)
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut g = self.clone();
        if !g.remove_edge(u, v) {
            return invalid(format!("({u},{v}) is not an edge"));
        }
        Ok(g)
    }

    /// Contracts `{u,v}`. The merged vertex keeps id `min(u,v)`; the larger
    /// id is removed and higher ids shift down by one. Parallel edges are
    /// suppressed.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return invalid(format!("({u},{v}) is not an edge"));
        }
        let (a, b) = (u.min(v), u.max(v));
        let mut g = self.clone();
        for &w in &self.adj[b] {
            if w != a {
                g.add_edge(a, w).unwrap();
            }
        }
        Ok(g.delete_vertices(&[b]).0)
    }

    /// Replaces the degree-2 vertex `v` by an edge between its neighbours.
    pub fn dissolve_vertex(&self, v: usize) -> Result<Graph> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range"));
        }
        if self.degree(v) != 2 {
            return invalid(format!("vertex {v} has degree {}, not 2", self.degree(v)));
        }
        let (a, b) = (self.adj[v][0], self.adj[v][1]);
        let mut g = self.clone();
        g.add_edge(a, b).unwrap();
        Ok(g.delete_vertices(&[v]).0)
    }

    /// Subdivides `{u,v}`; the new vertex gets id `n`.
    pub fn subdivide_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut g = self.delete_edge(u, v)?;
        let w = g.add_vertex();
        g.add_edge(u, w).unwrap();
        g.add_edge(v, w).unwrap();
        Ok(g)
    }

    /// Relabels by `perm`, where vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v).unwrap();
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n).unwrap();
        }
        g
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Whether `set` induces a connected subgraph (false when empty).
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let inside: std::collections::HashSet<usize> = set.iter().copied().collect();
        let mut seen = std::collections::HashSet::from([set[0]]);
        let mut stack = vec![set[0]];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if inside.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == inside.len()
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.components().len() == self.n
    }

    /// Breadth-first distances from `s`; `usize::MAX` marks unreachable.
    pub fn bfs_distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }
}
