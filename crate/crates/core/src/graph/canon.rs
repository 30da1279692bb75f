//! Canonical labelling by colour refinement plus individualisation search.
//!
//! The canonical form is the lexicographically least upper-triangle
//! adjacency bit string over all leaves of the search tree. Children of a
//! node are pruned when an automorphism already found (and fixing the
//! node's individualised prefix) maps them onto an explored sibling.

use super::Graph;
use serde::{Deserialize, Serialize};

/// `bytes` is the vertex count (4 bytes, big endian) followed by the
/// canonical upper triangle packed row-major, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub bytes: Vec<u8>,
    /// Number of vertex orbits of the automorphism group.
    pub orbit_count: usize,
}

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub code: CanonicalCode,
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// `orbit[v]` is the least vertex in the automorphism orbit of `v`.
    pub orbit: Vec<usize>,
    /// Automorphism group generators discovered by the search.
    pub generators: Vec<Vec<usize>>,
}

impl CanonicalForm {
    /// The canonical graph: vertex `v` of the input relabelled to `labeling[v]`.
    pub fn apply(&self, g: &Graph) -> Graph {
        g.relabel(&self.labeling)
    }
}

pub fn canonical_code(g: &Graph) -> CanonicalCode {
    canonical_form(g).code
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n() && g.m() == h.m() && g.degree_sequence() == h.degree_sequence()
        && canonical_code(g) == canonical_code(h)
}

type Cells = Vec<Vec<usize>>;

struct Search<'a> {
    g: &'a Graph,
    first: Option<(Vec<u8>, Vec<usize>)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    /// Individualised vertices on the first path.
    first_path: Vec<usize>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_form_with(g, vec![(0..g.n()).collect()])
}

/// Canonical form relative to an ordered partition of the vertices: only
/// labellings that place cell `i` before cell `i+1` are considered, so
/// isomorphisms are those mapping each cell onto the same-index cell.
pub fn canonical_form_with(g: &Graph, initial: Vec<Vec<usize>>) -> CanonicalForm {
    let n = g.n();
    debug_assert_eq!(initial.iter().map(Vec::len).sum::<usize>(), n);
    let mut s = Search { g, first: None, best: None, generators: Vec::new(), first_path: Vec::new() };
    if n > 0 {
        let mut cells: Cells = initial.into_iter().filter(|c| !c.is_empty()).collect();
        refine(g, &mut cells);
        s.descend(cells, &mut Vec::new());
    }
    let (bits, labeling) = s.best.take().unwrap_or_else(|| (Vec::new(), Vec::new()));
    let mut bytes = (n as u32).to_be_bytes().to_vec();
    bytes.extend(bits);
    let orbit = orbits(n, &s.generators, |_| true);
    let orbit_count = (0..n).filter(|&v| orbit[v] == v).count();
    CanonicalForm { code: CanonicalCode { bytes, orbit_count }, labeling, orbit, generators: s.generators }
}

impl Search<'_> {
    /// Returns `Some(level)` to unwind to the node at depth `level`.
    fn descend(&mut self, cells: Cells, prefix: &mut Vec<usize>) -> Option<usize> {
        let Some(t) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells, prefix);
        };
        let depth = prefix.len();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[t] {
            if !tried.is_empty() {
                let fixing: Vec<&Vec<usize>> = self
                    .generators
                    .iter()
                    .filter(|p| prefix.iter().all(|&x| p[x] == x))
                    .collect();
                let orb = orbits_of(self.g.n(), &fixing);
                if tried.iter().any(|&u| orb[u] == orb[v]) {
                    continue;
                }
            }
            tried.push(v);
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            for (i, c) in cells.iter().enumerate() {
                if i == t {
                    next.push(vec![v]);
                    next.push(c.iter().copied().filter(|&x| x != v).collect());
                } else {
                    next.push(c.clone());
                }
            }
            refine(self.g, &mut next);
            prefix.push(v);
            if self.first.is_none() {
                self.first_path.push(v);
            }
            let jump = self.descend(next, prefix);
            prefix.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &Cells, prefix: &[usize]) -> Option<usize> {
        let n = self.g.n();
        let mut lab = vec![0; n];
        for (i, c) in cells.iter().enumerate() {
            lab[c[0]] = i;
        }
        let code = encode(self.g, &lab);
        let Some((first_code, first_lab)) = &self.first else {
            self.first = Some((code.clone(), lab.clone()));
            self.best = Some((code, lab));
            return None;
        };
        if code == *first_code {
            let gamma = compose_inverse(first_lab, &lab);
            self.generators.push(gamma);
            // Unwind to where this path left the first path.
            let common = prefix.iter().zip(&self.first_path).take_while(|(a, b)| a == b).count();
            return Some(common);
        }
        let (best_code, best_lab) = self.best.as_ref().unwrap();
        if code == *best_code {
            let gamma = compose_inverse(best_lab, &lab);
            self.generators.push(gamma);
        } else if code < *best_code {
            self.best = Some((code, lab));
        }
        None
    }
}

/// `gamma(v) = a^{-1}(b(v))`, an automorphism when both labelings give the
/// same graph.
fn compose_inverse(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (v, &p) in a.iter().enumerate() {
        inv[p] = v;
    }
    b.iter().map(|&p| inv[p]).collect()
}

fn encode(g: &Graph, lab: &[usize]) -> Vec<u8> {
    let n = g.n();
    let mut inv = vec![0; n];
    for (v, &p) in lab.iter().enumerate() {
        inv[p] = v;
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut out = vec![0u8; total.div_ceil(8)];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(inv[i], inv[j]) {
                out[k / 8] |= 0x80 >> (k % 8);
            }
            k += 1;
        }
    }
    out
}

fn orbits(n: usize, gens: &[Vec<usize>], keep: impl Fn(&Vec<usize>) -> bool) -> Vec<usize> {
    let sel: Vec<&Vec<usize>> = gens.iter().filter(|p| keep(p)).collect();
    orbits_of(n, &sel)
}

/// Least-element orbit representatives under the group generated by `gens`.
fn orbits_of(n: usize, gens: &[&Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in gens {
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, g[v]));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Equitable refinement of an ordered partition. Split fragments are
/// ordered by ascending neighbour count, which keeps the procedure
/// label-invariant.
fn refine(g: &Graph, cells: &mut Cells) {
    let n = g.n();
    let mut cnt = vec![0usize; n];
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            cnt.iter_mut().for_each(|c| *c = 0);
            for &w in &cells[s] {
                for &u in g.neighbors(w) {
                    cnt[u] += 1;
                }
            }
            let mut next: Cells = Vec::with_capacity(cells.len());
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut sorted = c.clone();
                sorted.sort_by_key(|&v| (cnt[v], v));
                let mut start = 0;
                for i in 1..=sorted.len() {
                    if i == sorted.len() || cnt[sorted[i]] != cnt[sorted[start]] {
                        let mut part = sorted[start..i].to_vec();
                        part.sort_unstable();
                        next.push(part);
                        start = i;
                    }
                }
            }
            if next.len() != cells.len() {
                changed = true;
                *cells = next;
            }
            s += 1;
        }
        if !changed {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn orbit_counts() {
        assert_eq!(canonical_code(&complete(5)).orbit_count, 1);
        assert_eq!(canonical_code(&path(3)).orbit_count, 2);
        assert_eq!(canonical_code(&path(4)).orbit_count, 2);
        assert_eq!(canonical_code(&petersen()).orbit_count, 1);
        assert_eq!(canonical_code(&star(4)).orbit_count, 2);
    }

    #[test]
    fn k3_vs_c3_and_p4_vs_claw() {
        assert_eq!(canonical_code(&complete(3)), canonical_code(&cycle(3)));
        assert_ne!(canonical_code(&path(4)), canonical_code(&star(3)));
    }

    #[test]
    fn canonical_graph_is_fixed_point() {
        let g = petersen();
        let f = canonical_form(&g);
        let cg = f.apply(&g);
        assert_eq!(canonical_form(&cg).apply(&cg), cg);
    }

    #[test]
    fn generators_are_automorphisms() {
        for g in [petersen(), grid(3, 3), cycle(6), complete_bipartite(2, 3)] {
            let f = canonical_form(&g);
            for p in &f.generators {
                assert_eq!(g.relabel(p), g);
            }
        }
    }
}
