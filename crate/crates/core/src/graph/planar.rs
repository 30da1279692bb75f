//! Planarity by path addition on biconnected blocks, producing a rotation
//! system; apex number by increasing-size deletion search.

use super::Graph;
use crate::error::{Error, Result};
use crate::util::Combinations;
use std::collections::HashSet;

/// Cyclic neighbour order around every vertex.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
}

impl RotationSystem {
    fn succ(&self, v: usize, u: usize) -> usize {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == u).expect("dart present");
        r[(i + 1) % r.len()]
    }

    /// Faces as dart sequences; the dart after `(u,v)` is `(v, succ_v(u))`.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut out = Vec::new();
        for v in 0..self.rotation.len() {
            for &u in &self.rotation[v] {
                if seen.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while seen.insert((a, b)) {
                    face.push((a, b));
                    let c = self.succ(b, a);
                    a = b;
                    b = c;
                }
                out.push(face);
            }
        }
        out
    }

    /// Whether the rotation system is a plane embedding of `g`: it lists
    /// exactly the neighbours of each vertex and satisfies Euler's formula
    /// on every component.
    pub fn is_plane_embedding_of(&self, g: &Graph) -> bool {
        if self.rotation.len() != g.n() {
            return false;
        }
        for v in 0..g.n() {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != g.neighbors(v) {
                return false;
            }
        }
        let comps = g.components();
        let mut comp_of = vec![0; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut faces_per = vec![0usize; comps.len()];
        for f in self.faces() {
            faces_per[comp_of[f[0].0]] += 1;
        }
        comps.iter().enumerate().all(|(i, c)| {
            let e: usize = c.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            e == 0 || c.len() + faces_per[i] == e + 2
        })
    }
}

pub fn is_planar(g: &Graph) -> bool {
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return false;
    }
    planar_embedding(g).is_some()
}

/// A plane rotation system for `g`, or `None` if `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    let mut rotation = vec![Vec::new(); g.n()];
    for block in blocks(g) {
        let mut verts: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() == 2 {
            rotation[verts[0]].push(verts[1]);
            rotation[verts[1]].push(verts[0]);
            continue;
        }
        let local = g.induced(&verts);
        let rot = embed_biconnected(&local)?;
        for (i, r) in rot.into_iter().enumerate() {
            rotation[verts[i]].extend(r.into_iter().map(|j| verts[j]));
        }
    }
    Some(RotationSystem { rotation })
}

/// Edge sets of the biconnected blocks.
fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    const UNSET: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut out = Vec::new();
    let mut estack: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != UNSET {
            continue;
        }
        disc[s] = timer;
        low[s] = timer;
        timer += 1;
        let mut stack: Vec<(usize, usize, usize)> = vec![(s, UNSET, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, p, i) = *top;
            if i < g.degree(v) {
                top.2 += 1;
                let w = g.neighbors(v)[i];
                if disc[w] == UNSET {
                    estack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if w != p && disc[w] < disc[v] {
                    estack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Path-addition embedding of a biconnected graph on at least 3 vertices.
/// Faces are kept as directed cycles so that every dart occurs once.
fn embed_biconnected(h: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = h.n();
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let mut on = vec![false; n];
    let mut used: HashSet<(usize, usize)> = HashSet::new();

    // Initial cycle through the edge (0, w).
    let w0 = h.neighbors(0)[0];
    let cyc = {
        let mut prev = vec![usize::MAX; n];
        prev[w0] = w0;
        let mut q = std::collections::VecDeque::from([w0]);
        while let Some(v) = q.pop_front() {
            for &u in h.neighbors(v) {
                if prev[u] == usize::MAX && !(v == w0 && u == 0) {
                    prev[u] = v;
                    q.push_back(u);
                }
            }
        }
        let mut c = vec![0];
        let mut x = prev[0];
        while x != w0 {
            c.push(x);
            x = prev[x];
        }
        c.push(w0);
        c
    };
    for i in 0..cyc.len() {
        on[cyc[i]] = true;
        used.insert(key(cyc[i], cyc[(i + 1) % cyc.len()]));
    }
    let rev: Vec<usize> = cyc.iter().rev().copied().collect();
    let mut faces: Vec<Vec<usize>> = vec![cyc, rev];
    let mut face_sets: Vec<HashSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
    let total = h.m();

    while used.len() < total {
        // Fragments: (contacts, path between two contacts).
        let mut frags: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (u, v) in h.edges() {
            if on[u] && on[v] && !used.contains(&(u, v)) {
                frags.push((vec![u, v], vec![u, v]));
            }
        }
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if on[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = frags.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut i = 0;
            let mut contacts = Vec::new();
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &u in h.neighbors(v) {
                    if on[u] {
                        contacts.push(u);
                    } else if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                    }
                }
            }
            contacts.sort_unstable();
            contacts.dedup();
            let p = fragment_path(h, &on, &comp, id, &contacts);
            frags.push((contacts, p));
        }
        let mut choice: Option<(usize, usize, usize)> = None; // (count, frag, face)
        for (fi, (contacts, _)) in frags.iter().enumerate() {
            let adm: Vec<usize> = (0..faces.len())
                .filter(|&f| contacts.iter().all(|c| face_sets[f].contains(c)))
                .collect();
            if adm.is_empty() {
                return None;
            }
            if choice.is_none_or(|(c, _, _)| adm.len() < c) {
                choice = Some((adm.len(), fi, adm[0]));
                if adm.len() == 1 {
                    break;
                }
            }
        }
        let (_, fi, f) = choice.expect("some fragment remains");
        let p = &frags[fi].1;
        let (a, b) = (p[0], *p.last().unwrap());
        let face = &faces[f];
        let len = face.len();
        let i = face.iter().position(|&x| x == a).unwrap();
        let j = face.iter().position(|&x| x == b).unwrap();
        let inner = &p[1..p.len() - 1];
        let mut f1: Vec<usize> = (0..).map(|s| face[(i + s) % len]).take((j + len - i) % len + 1).collect();
        f1.extend(inner.iter().rev());
        let mut f2: Vec<usize> = (0..).map(|s| face[(j + s) % len]).take((i + len - j) % len + 1).collect();
        f2.extend(inner.iter());
        for w in p.windows(2) {
            used.insert(key(w[0], w[1]));
        }
        for &x in p {
            on[x] = true;
        }
        face_sets[f] = f1.iter().copied().collect();
        faces[f] = f1;
        face_sets.push(f2.iter().copied().collect());
        faces.push(f2);
    }

    // Rotation from oriented faces: for u -> v -> w, succ_v(u) = w.
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in &faces {
        let l = f.len();
        for s in 0..l {
            let (u, v, w) = (f[s], f[(s + 1) % l], f[(s + 2) % l]);
            succ[v].push((u, w));
        }
    }
    let mut rot = vec![Vec::new(); n];
    for v in 0..n {
        let d = h.degree(v);
        let start = h.neighbors(v)[0];
        let mut x = start;
        loop {
            rot[v].push(x);
            x = succ[v].iter().find(|&&(u, _)| u == x)?.1;
            if x == start || rot[v].len() > d {
                break;
            }
        }
        if rot[v].len() != d {
            return None;
        }
    }
    Some(rot)
}

/// Path from one contact through the component `id` to a different contact.
fn fragment_path(h: &Graph, on: &[bool], comp: &[usize], id: usize, contacts: &[usize]) -> Vec<usize> {
    let a = contacts[0];
    let x = *h.neighbors(a).iter().find(|&&u| !on[u] && comp[u] == id).expect("attached");
    let mut prev = vec![usize::MAX; h.n()];
    prev[x] = x;
    let mut q = std::collections::VecDeque::from([x]);
    while let Some(v) = q.pop_front() {
        if let Some(&b) = h.neighbors(v).iter().find(|&&u| on[u] && u != a) {
            let mut p = vec![b];
            let mut y = v;
            loop {
                p.push(y);
                if y == x {
                    break;
                }
                y = prev[y];
            }
            p.push(a);
            p.reverse();
            return p;
        }
        for &u in h.neighbors(v) {
            if !on[u] && comp[u] == id && prev[u] == usize::MAX {
                prev[u] = v;
                q.push_back(u);
            }
        }
    }
    unreachable!("biconnected fragments have two contacts")
}

/// Default vertex budget for [`apex_number`].
pub const APEX_BUDGET: usize = 12;

pub fn apex_number(g: &Graph) -> Result<usize> {
    apex_number_with_budget(g, APEX_BUDGET)
}

/// Minimum `|A|` with `g - A` planar, by subsets of increasing size.
pub fn apex_number_with_budget(g: &Graph, budget: usize) -> Result<usize> {
    if g.n() > budget {
        return Err(Error::ResourceLimit(format!(
            "apex number search limited to {budget} vertices, graph has {}",
            g.n()
        )));
    }
    for k in 0..=g.n() {
        for s in Combinations::new(g.n(), k) {
            if is_planar(&g.delete_vertices(&s).0) {
                return Ok(k);
            }
        }
    }
    unreachable!("the empty graph is planar")
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn small_examples() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&complete_bipartite(3, 3)));
        assert!(is_planar(&grid(5, 5)));
        assert!(!is_planar(&petersen()));
        assert!(is_planar(&Graph::new(0)));
        assert!(is_planar(&complete_bipartite(2, 7)));
    }

    #[test]
    fn embeddings_satisfy_euler() {
        for g in [complete(4), grid(5, 5), grid(10, 10), cycle(7), path(5), star(6), complete_bipartite(2, 5)] {
            let r = planar_embedding(&g).unwrap();
            assert!(r.is_plane_embedding_of(&g), "{g:?}");
        }
        let two = complete(4).disjoint_union(&cycle(5));
        assert!(planar_embedding(&two).unwrap().is_plane_embedding_of(&two));
    }

    #[test]
    fn block_tree_embeddings() {
        // Two triangles sharing a cut vertex plus a pendant path.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6)]).unwrap();
        assert!(planar_embedding(&g).unwrap().is_plane_embedding_of(&g));
    }

    #[test]
    fn apex_examples() {
        assert_eq!(apex_number(&grid(3, 3)).unwrap(), 0);
        assert_eq!(apex_number(&complete(5)).unwrap(), 1);
        assert_eq!(apex_number(&complete(7)).unwrap(), 3);
        assert!(matches!(apex_number(&grid(4, 4)), Err(Error::ResourceLimit(_))));
    }
}
