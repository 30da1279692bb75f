//! Walls: elementary templates with subdivision lengths, their paths,
//! layers, subwalls, bricks and canonical partitions.
//!
//! Template coordinates are 1-indexed `(x, y)` with `x` in `1..=2r` and `y`
//! in `1..=r`. A wall stores its template height, a subdivision count per
//! template edge and a map from its realised vertices to host ids, so a
//! subwall of a subdivided wall is still a template plus lengths. Every
//! vertex list returned by a [`Wall`] is in host ids.

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// The elementary `r`-wall on template coordinates.
#[derive(Clone, Debug)]
struct Template {
    r: usize,
    coords: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Template {
    fn new(r: usize) -> Template {
        let w = 2 * r;
        let mut coords = Vec::new();
        let mut index = vec![None; w * r];
        for y in 1..=r {
            for x in 1..=w {
                if (x, y) == (1, r) || (x, y) == (w, 1) {
                    continue;
                }
                index[(y - 1) * w + x - 1] = Some(coords.len());
                coords.push((x, y));
            }
        }
        let mut t = Template { r, coords, index, edges: Vec::new() };
        let mut edges = Vec::new();
        for y in 1..=r {
            for x in 1..=w {
                let Some(u) = t.at(x, y) else { continue };
                if let Some(v) = t.at(x + 1, y) {
                    edges.push((u, v));
                }
                if (x + y) % 2 == 0 {
                    if let Some(v) = t.at(x, y + 1) {
                        edges.push((u, v));
                    }
                }
            }
        }
        edges.sort_unstable();
        t.edges = edges;
        t
    }

    fn at(&self, x: usize, y: usize) -> Option<usize> {
        if x == 0 || y == 0 || x > 2 * self.r || y > self.r {
            return None;
        }
        self.index[(y - 1) * 2 * self.r + x - 1]
    }

    fn vid(&self, x: usize, y: usize) -> usize {
        self.at(x, y).expect("template vertex")
    }

    fn n(&self) -> usize {
        self.coords.len()
    }

    /// Vertices of the `i`-th vertical path, bottom to top.
    fn vertical(&self, i: usize) -> Vec<usize> {
        let c = 2 * i - 1;
        let mut out = vec![self.vid(c, 1)];
        for y in 2..self.r {
            if y % 2 == 0 {
                out.push(self.vid(c, y));
                out.push(self.vid(c + 1, y));
            } else {
                out.push(self.vid(c + 1, y));
                out.push(self.vid(c, y));
            }
        }
        out.push(self.vid(c + 1, self.r));
        out
    }

    /// Vertices of the `j`-th horizontal path, left to right.
    fn horizontal(&self, j: usize) -> Vec<usize> {
        (1..=2 * self.r).filter_map(|x| self.at(x, j)).collect()
    }

    fn perimeter(&self) -> Vec<usize> {
        let r = self.r;
        let mut cyc = self.horizontal(1);
        let right = self.vertical(r);
        cyc.extend_from_slice(&right[1..]);
        let mut top = self.horizontal(r);
        top.reverse();
        cyc.extend_from_slice(&top[1..]);
        let mut left = self.vertical(1);
        left.reverse();
        cyc.extend_from_slice(&left[1..left.len() - 1]);
        cyc
    }

    /// Bricks as hexagons `(x,j),(x+1,j),(x+2,j),(x+2,j+1),(x+1,j+1),(x,j+1)`,
    /// indexed by band `j` and left column `x`.
    fn bricks(&self) -> Vec<((usize, usize), Vec<usize>)> {
        let mut out = Vec::new();
        for j in 1..self.r {
            let mut x = if j % 2 == 1 { 1 } else { 2 };
            while x + 2 <= 2 * self.r {
                let cyc = [(x, j), (x + 1, j), (x + 2, j), (x + 2, j + 1), (x + 1, j + 1), (x, j + 1)];
                if cyc.iter().all(|&(a, b)| self.at(a, b).is_some()) {
                    out.push(((j, x), cyc.iter().map(|&(a, b)| self.vid(a, b)).collect()));
                }
                x += 2;
            }
        }
        out
    }
}

fn odd_height(r: usize) -> Result<()> {
    if r < 3 || r % 2 == 0 {
        return invalid(format!("wall height must be odd and at least 3, got {r}"));
    }
    Ok(())
}

/// An `r`-wall: a subdivided elementary wall mapped into a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    r: usize,
    /// Template edge `(u, v)`, `u < v`, to the number of inserted vertices.
    subdiv: BTreeMap<(usize, usize), usize>,
    host: Vec<usize>,
    pegs: Vec<usize>,
    corners: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WallJson {
    pub r: usize,
    /// `[u, v, k]`: template edge `u-v` carries `k` subdivision vertices.
    pub subdivisions: Vec<[usize; 3]>,
    #[serde(default)]
    pub host: Option<Vec<usize>>,
    #[serde(default)]
    pub pegs: Option<Vec<usize>>,
    #[serde(default)]
    pub corners: Option<Vec<usize>>,
}

pub fn build_elementary_wall(r: usize) -> Result<Wall> {
    Wall::with_subdivisions(r, BTreeMap::new())
}

impl Wall {
    pub fn with_subdivisions(r: usize, subdiv: BTreeMap<(usize, usize), usize>) -> Result<Wall> {
        odd_height(r)?;
        let t = Template::new(r);
        let edges: HashSet<(usize, usize)> = t.edges.iter().copied().collect();
        for &(u, v) in subdiv.keys() {
            if !edges.contains(&(u, v)) {
                return invalid(format!("({u},{v}) is not a template edge of the elementary {r}-wall"));
            }
        }
        let subdiv: BTreeMap<_, _> = subdiv.into_iter().filter(|&(_, k)| k > 0).collect();
        let n = t.n() + subdiv.values().sum::<usize>();
        let mut w = Wall { r, subdiv, host: (0..n).collect(), pegs: Vec::new(), corners: Vec::new() };
        w.default_pegs(&t);
        Ok(w)
    }

    fn default_pegs(&mut self, t: &Template) {
        let r = self.r;
        let corners = [(1, 1), (2, r), (2 * r - 1, 1), (2 * r, r)];
        self.corners = corners.iter().map(|&(x, y)| self.host[t.vid(x, y)]).collect();
        let g = self.local_graph(t);
        self.pegs = t.perimeter().into_iter().filter(|&v| g.degree(v) == 2).map(|v| self.host[v]).collect();
        self.pegs.sort_unstable();
    }

    /// Replaces the peg and corner choice. Corners must be pegs and pegs
    /// must lie on the perimeter.
    pub fn with_pegs(mut self, pegs: Vec<usize>, corners: Vec<usize>) -> Result<Wall> {
        let perim: HashSet<usize> = self.perimeter().into_iter().collect();
        if let Some(p) = pegs.iter().find(|p| !perim.contains(p)) {
            return invalid(format!("peg {p} is not on the perimeter"));
        }
        let ps: HashSet<usize> = pegs.iter().copied().collect();
        if let Some(c) = corners.iter().find(|c| !ps.contains(c)) {
            return invalid(format!("corner {c} is not a peg"));
        }
        self.pegs = pegs;
        self.corners = corners;
        Ok(self)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn height(&self) -> usize {
        self.r
    }

    pub fn pegs(&self) -> &[usize] {
        &self.pegs
    }

    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    pub fn subdivisions(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.subdiv
    }

    /// Host id of each realised vertex.
    pub fn host(&self) -> &[usize] {
        &self.host
    }

    /// Same wall, with realised vertex `v` sent to host id `map[v]`.
    pub fn embedded(mut self, map: &[usize]) -> Result<Wall> {
        if map.len() != self.host.len() {
            return invalid(format!("host map has {} entries for {} wall vertices", map.len(), self.host.len()));
        }
        let old: HashMap<usize, usize> = self.host.iter().copied().zip(map.iter().copied()).collect();
        self.pegs = self.pegs.iter().map(|p| old[p]).collect();
        self.corners = self.corners.iter().map(|p| old[p]).collect();
        self.host = map.to_vec();
        Ok(self)
    }

    fn template(&self) -> Template {
        Template::new(self.r)
    }

    /// First local id of the subdivision vertices of each template edge.
    fn subdiv_offsets(&self, t: &Template) -> BTreeMap<(usize, usize), usize> {
        let mut next = t.n();
        let mut out = BTreeMap::new();
        for (&e, &k) in &self.subdiv {
            out.insert(e, next);
            next += k;
        }
        out
    }

    fn local_graph(&self, t: &Template) -> Graph {
        let mut g = Graph::new(self.host.len());
        let off = self.subdiv_offsets(t);
        for &(u, v) in &t.edges {
            let chain = chain(u, v, &self.subdiv, &off);
            for w in chain.windows(2) {
                g.add_edge(w[0], w[1]).unwrap();
            }
        }
        g
    }

    /// The wall on its own, in local ids (`host()` maps them to host ids).
    pub fn graph(&self) -> Graph {
        self.local_graph(&self.template())
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.host.clone();
        v.sort_unstable();
        v
    }

    /// Edges of the wall in host ids, each as `(min, max)`.
    pub fn host_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .graph()
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.host[a], self.host[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Realises a template vertex sequence in local ids.
    fn realise(&self, t: &Template, seq: &[usize]) -> Vec<usize> {
        let off = self.subdiv_offsets(t);
        let mut out = vec![seq[0]];
        for w in seq.windows(2) {
            let c = chain(w[0], w[1], &self.subdiv, &off);
            out.extend_from_slice(&c[1..]);
        }
        out
    }

    fn to_host(&self, seq: Vec<usize>) -> Vec<usize> {
        seq.into_iter().map(|v| self.host[v]).collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.r {
            return invalid(format!("path index {i} outside 1..={}", self.r));
        }
        Ok(())
    }

    /// `P_i`, bottom to top.
    pub fn vertical_path(&self, i: usize) -> Result<Vec<usize>> {
        self.check_index(i)?;
        let t = self.template();
        Ok(self.to_host(self.realise(&t, &t.vertical(i))))
    }

    /// `L_j`, left to right.
    pub fn horizontal_path(&self, j: usize) -> Result<Vec<usize>> {
        self.check_index(j)?;
        let t = self.template();
        Ok(self.to_host(self.realise(&t, &t.horizontal(j))))
    }

    /// The perimeter `D(W)` as a closed vertex sequence (first vertex not repeated).
    pub fn perimeter(&self) -> Vec<usize> {
        let t = self.template();
        let mut p = t.perimeter();
        p.push(p[0]);
        let mut out = self.realise(&t, &p);
        out.pop();
        self.to_host(out)
    }

    /// Bricks as closed vertex sequences, band by band from the bottom.
    pub fn bricks(&self) -> Vec<Vec<usize>> {
        let t = self.template();
        t.bricks()
            .into_iter()
            .map(|(_, mut c)| {
                c.push(c[0]);
                let mut out = self.realise(&t, &c);
                out.pop();
                self.to_host(out)
            })
            .collect()
    }

    /// The `(r-1)/2` layers, outermost first.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in 1..=(self.r - 1) / 2 {
            let q = self.r - 2 * (s - 1);
            let sub = self.subwall(s, s, q).expect("nested layer subwall");
            out.push(sub.perimeter());
        }
        out
    }

    /// The two branch vertices of `P_m ∩ L_m`, `m = (r+1)/2`.
    pub fn central_vertices(&self) -> [usize; 2] {
        let t = self.template();
        let m = self.r.div_ceil(2);
        [self.host[t.vid(2 * m - 1, m)], self.host[t.vid(2 * m, m)]]
    }

    /// The `q`-subwall on vertical paths `i0..i0+q` and horizontal paths
    /// `j0..j0+q` (1-indexed, inclusive start).
    pub fn subwall(&self, i0: usize, j0: usize, q: usize) -> Result<Wall> {
        odd_height(q)?;
        if i0 == 0 || j0 == 0 || i0 + q - 1 > self.r || j0 + q - 1 > self.r {
            return invalid(format!("subwall of height {q} at ({i0},{j0}) exceeds the {}-wall", self.r));
        }
        let t = self.template();
        let (x_lo, x_hi) = (2 * i0 - 1, 2 * (i0 + q - 1));
        let (y_lo, y_hi) = (j0, j0 + q - 1);
        let inside = |v: usize| {
            let (x, y) = t.coords[v];
            (x_lo..=x_hi).contains(&x) && (y_lo..=y_hi).contains(&y)
        };
        let mut alive: BTreeSet<usize> = (0..t.n()).filter(|&v| inside(v)).collect();
        let box_edges: Vec<(usize, usize)> =
            t.edges.iter().copied().filter(|&(u, v)| inside(u) && inside(v)).collect();
        loop {
            let mut deg: HashMap<usize, usize> = HashMap::new();
            for &(u, v) in &box_edges {
                if alive.contains(&u) && alive.contains(&v) {
                    *deg.entry(u).or_default() += 1;
                    *deg.entry(v).or_default() += 1;
                }
            }
            let drop: Vec<usize> = alive.iter().copied().filter(|v| deg.get(v).copied().unwrap_or(0) <= 1).collect();
            if drop.is_empty() {
                break;
            }
            for v in drop {
                alive.remove(&v);
            }
        }
        let flip = (j0 - 1) % 2 == 1;
        let sub_t = Template::new(q);
        // Parent template vertex of each sub-template vertex.
        let mut parent_of = vec![usize::MAX; sub_t.n()];
        for &v in &alive {
            let (x, y) = t.coords[v];
            let xl = x - 2 * (i0 - 1);
            let mut yl = y - (j0 - 1);
            if flip {
                yl = q + 1 - yl;
            }
            match sub_t.at(xl, yl) {
                Some(s) => parent_of[s] = v,
                None => return Err(Error::ConstructionBug(format!("subwall vertex ({x},{y}) has no template image"))),
            }
        }
        if parent_of.contains(&usize::MAX) {
            return Err(Error::ConstructionBug("subwall misses template vertices".into()));
        }
        let parent_edges: HashSet<(usize, usize)> = t.edges.iter().copied().collect();
        let off = self.subdiv_offsets(&t);
        let mut subdiv = BTreeMap::new();
        let mut extra: Vec<((usize, usize), Vec<usize>)> = Vec::new();
        for &(a, b) in &sub_t.edges {
            let (pa, pb) = (parent_of[a], parent_of[b]);
            let key = (pa.min(pb), pa.max(pb));
            if !parent_edges.contains(&key) {
                return Err(Error::ConstructionBug(format!("subwall edge ({a},{b}) is not a wall edge")));
            }
            let c = chain(pa, pb, &self.subdiv, &off);
            if c.len() > 2 {
                subdiv.insert((a, b), c.len() - 2);
                extra.push(((a, b), c[1..c.len() - 1].to_vec()));
            }
        }
        let mut host: Vec<usize> = parent_of.iter().map(|&p| self.host[p]).collect();
        for (_, inner) in extra {
            host.extend(inner.into_iter().map(|v| self.host[v]));
        }
        let mut w = Wall { r: q, subdiv, host, pegs: Vec::new(), corners: Vec::new() };
        w.default_pegs(&sub_t);
        Ok(w)
    }

    /// `W^(q)`: remove the first `(r-q)/2` layers.
    pub fn central_subwall(&self, q: usize) -> Result<Wall> {
        odd_height(q)?;
        if q > self.r {
            return invalid(format!("central {q}-subwall of a {}-wall", self.r));
        }
        let t = (self.r - q) / 2;
        self.subwall(t + 1, t + 1, q)
    }

    /// Whether `self` is a subwall of `w`: same host ids, and every vertical
    /// (horizontal) path is a subpath of a vertical (horizontal) path of `w`.
    pub fn is_subwall_of(&self, w: &Wall) -> bool {
        let paths = |x: &Wall, vertical: bool| -> Vec<Vec<usize>> {
            (1..=x.r)
                .map(|i| if vertical { x.vertical_path(i).unwrap() } else { x.horizontal_path(i).unwrap() })
                .collect()
        };
        let ok = |mine: Vec<Vec<usize>>, theirs: Vec<Vec<usize>>| {
            mine.iter().all(|p| theirs.iter().any(|q| is_subpath(p, q)))
        };
        self.r <= w.r && ok(paths(self, true), paths(w, true)) && ok(paths(self, false), paths(w, false))
    }

    /// The interior: the wall without perimeter edges and without perimeter
    /// vertices of degree two. Returned as host vertex and edge sets.
    pub fn interior(&self) -> (BTreeSet<usize>, BTreeSet<(usize, usize)>) {
        let g = self.graph();
        let perim = {
            let t = self.template();
            let mut p = t.perimeter();
            p.push(p[0]);
            let mut c = self.realise(&t, &p);
            c.pop();
            c
        };
        let mut perim_edges = HashSet::new();
        for i in 0..perim.len() {
            let (a, b) = (perim[i], perim[(i + 1) % perim.len()]);
            perim_edges.insert((a.min(b), a.max(b)));
        }
        let on_perim: HashSet<usize> = perim.iter().copied().collect();
        let verts = (0..g.n())
            .filter(|&v| !(on_perim.contains(&v) && g.degree(v) == 2))
            .map(|v| self.host[v])
            .collect();
        let edges = g
            .edges()
            .into_iter()
            .filter(|e| !perim_edges.contains(e))
            .map(|(a, b)| {
                let (x, y) = (self.host[a], self.host[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        (verts, edges)
    }

    pub fn canonical_partition(&self) -> CanonicalPartition {
        let t = self.template();
        let r = self.r;
        let ps: Vec<Vec<usize>> = (1..=r).map(|i| self.realise(&t, &t.vertical(i))).collect();
        let ls: Vec<Vec<usize>> = (1..=r).map(|j| self.realise(&t, &t.horizontal(j))).collect();
        let p_sets: Vec<HashSet<usize>> = ps.iter().map(|p| p.iter().copied().collect()).collect();
        let l_sets: Vec<HashSet<usize>> = ls.iter().map(|p| p.iter().copied().collect()).collect();
        let mut internal = BTreeMap::new();
        let mut used = vec![false; self.host.len()];
        for i in 2..r {
            for j in 2..r {
                let p = &ps[i - 1];
                let a: Vec<usize> = if i % 2 == 0 {
                    let start = p.iter().position(|v| l_sets[j - 1].contains(v)).unwrap();
                    let stop = p[start..].iter().position(|v| l_sets[j].contains(v)).unwrap() + start;
                    p[start..stop].to_vec()
                } else {
                    let end = p.iter().rposition(|v| l_sets[j - 1].contains(v)).unwrap();
                    let from = p[..end].iter().rposition(|v| l_sets[j - 2].contains(v)).unwrap() + 1;
                    p[from..=end].to_vec()
                };
                let l = &ls[j - 1];
                let end = l.iter().rposition(|v| p_sets[i - 1].contains(v)).unwrap();
                let from = l[..end].iter().rposition(|v| p_sets[i - 2].contains(v)).unwrap() + 1;
                let mut bag: BTreeSet<usize> = a.into_iter().collect();
                bag.extend(l[from..=end].iter().copied());
                for &v in &bag {
                    assert!(!used[v], "canonical bags overlap at local vertex {v}");
                    used[v] = true;
                }
                internal.insert((i, j), bag.into_iter().map(|v| self.host[v]).collect::<Vec<_>>());
            }
        }
        let mut external: Vec<usize> = (0..self.host.len()).filter(|&v| !used[v]).map(|v| self.host[v]).collect();
        external.sort_unstable();
        for bag in internal.values_mut() {
            bag.sort_unstable();
        }
        CanonicalPartition { internal, external }
    }

    /// For each internal bag, the number of bricks it meets: a bag meets a
    /// brick when it holds both ends of a brick edge or a brick vertex of
    /// degree two in the wall.
    pub fn brick_incidence(&self, cp: &CanonicalPartition) -> BTreeMap<(usize, usize), usize> {
        let g = self.graph();
        let local: HashMap<usize, usize> = self.host.iter().enumerate().map(|(l, &h)| (h, l)).collect();
        let bricks = self.bricks();
        let mut out = BTreeMap::new();
        for (&key, bag) in &cp.internal {
            let set: HashSet<usize> = bag.iter().copied().collect();
            let count = bricks
                .iter()
                .filter(|b| {
                    (0..b.len()).any(|k| {
                        let (u, v) = (b[k], b[(k + 1) % b.len()]);
                        (set.contains(&u) && set.contains(&v)) || (set.contains(&u) && g.degree(local[&u]) == 2)
                    })
                })
                .count();
            out.insert(key, count);
        }
        out
    }

    pub fn to_json(&self) -> WallJson {
        WallJson {
            r: self.r,
            subdivisions: self.subdiv.iter().map(|(&(u, v), &k)| [u, v, k]).collect(),
            host: Some(self.host.clone()),
            pegs: Some(self.pegs.clone()),
            corners: Some(self.corners.clone()),
        }
    }

    pub fn from_json(j: &WallJson) -> Result<Wall> {
        let map: BTreeMap<_, _> = j.subdivisions.iter().map(|&[u, v, k]| ((u.min(v), u.max(v)), k)).collect();
        let mut w = Wall::with_subdivisions(j.r, map)?;
        if let Some(h) = &j.host {
            w = w.embedded(h)?;
        }
        if j.pegs.is_some() || j.corners.is_some() {
            let pegs = j.pegs.clone().unwrap_or_else(|| w.pegs.clone());
            let corners = j.corners.clone().unwrap_or_else(|| w.corners.clone());
            w = w.with_pegs(pegs, corners)?;
        }
        Ok(w)
    }

    /// Template coordinates of every realised vertex, subdivision vertices
    /// placed evenly along their edge. Used for drawing.
    pub fn layout(&self) -> Vec<(f64, f64)> {
        let t = self.template();
        let mut pos: Vec<(f64, f64)> = t.coords.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
        pos.resize(self.host.len(), (0.0, 0.0));
        let off = self.subdiv_offsets(&t);
        for (&(u, v), &k) in &self.subdiv {
            let (a, b) = (t.coords[u], t.coords[v]);
            for s in 0..k {
                let f = (s + 1) as f64 / (k + 1) as f64;
                pos[off[&(u, v)] + s] =
                    (a.0 as f64 + f * (b.0 as f64 - a.0 as f64), a.1 as f64 + f * (b.1 as f64 - a.1 as f64));
            }
        }
        pos
    }

    /// SVG drawing of the wall with vertices coloured by bag.
    pub fn partition_svg(&self, cp: &CanonicalPartition) -> String {
        let pos = self.layout();
        let scale = 30.0;
        let hgt = (self.r + 1) as f64 * scale;
        let p = |v: usize| (pos[v].0 * scale, hgt - pos[v].1 * scale);
        let mut bag_of: HashMap<usize, usize> = HashMap::new();
        for (k, bag) in cp.internal.values().enumerate() {
            for &v in bag {
                bag_of.insert(v, k + 1);
            }
        }
        let width = (2 * self.r + 1) as f64 * scale;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{hgt}\" viewBox=\"0 0 {width} {hgt}\">\n"
        );
        let g = self.graph();
        for (a, b) in g.edges() {
            let (pa, pb) = (p(a), p(b));
            s += &format!(
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#999\"/>\n",
                pa.0, pa.1, pb.0, pb.1
            );
        }
        for v in 0..g.n() {
            let c = bag_of.get(&self.host[v]).copied().unwrap_or(0);
            let hue = if c == 0 { 30 } else { (c * 47) % 360 };
            let light = if c == 0 { 45 } else { 60 };
            let pv = p(v);
            s += &format!(
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"hsl({hue},70%,{light}%)\"><title>{}</title></circle>\n",
                pv.0, pv.1, self.host[v]
            );
        }
        s + "</svg>\n"
    }
}

/// Local ids along template edge `u -> v` including both ends.
fn chain(u: usize, v: usize, subdiv: &BTreeMap<(usize, usize), usize>, off: &BTreeMap<(usize, usize), usize>) -> Vec<usize> {
    let key = (u.min(v), u.max(v));
    let k = subdiv.get(&key).copied().unwrap_or(0);
    let mut out = vec![key.0];
    if k > 0 {
        let base = off[&key];
        out.extend(base..base + k);
    }
    out.push(key.1);
    if u > v {
        out.reverse();
    }
    out
}

fn is_subpath(p: &[usize], q: &[usize]) -> bool {
    if p.is_empty() {
        return true;
    }
    let fwd = q.windows(p.len()).any(|w| w == p);
    let rev: Vec<usize> = p.iter().rev().copied().collect();
    fwd || q.windows(p.len()).any(|w| w == rev.as_slice())
}

/// Whether two walls have identical interiors.
pub fn is_tilt(a: &Wall, b: &Wall) -> bool {
    a.interior() == b.interior()
}

/// Internal bags indexed by `(i, j)` in `[2, r-1]²` plus one external bag,
/// all in host ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalPartition {
    pub internal: BTreeMap<(usize, usize), Vec<usize>>,
    pub external: Vec<usize>,
}

impl CanonicalPartition {
    /// Bags in index order: internal bags lexicographically, external last.
    pub fn bags(&self) -> Vec<&Vec<usize>> {
        self.internal.values().chain(std::iter::once(&self.external)).collect()
    }

    /// Bag index of every vertex of `0..n`, if assigned.
    pub fn owner(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (k, bag) in self.bags().into_iter().enumerate() {
            for &v in bag {
                if v < n {
                    out[v] = Some(k);
                }
            }
        }
        out
    }

    /// First violated partition property on `g`: coverage of `0..n`,
    /// disjointness, or connectivity of a bag.
    pub fn violation(&self, g: &Graph) -> Option<String> {
        let mut seen = vec![false; g.n()];
        for (k, bag) in self.bags().into_iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Some(format!("bag {k} holds out-of-range vertex {v}"));
                }
                if seen[v] {
                    return Some(format!("vertex {v} lies in two bags"));
                }
                seen[v] = true;
            }
            if !bag.is_empty() && !g.is_connected_subset(bag) {
                return Some(format!("bag {k} is disconnected"));
            }
        }
        seen.iter().position(|&s| !s).map(|v| format!("vertex {v} is in no bag"))
    }

    /// Bags that avoid every vertex of the first `p` layers of `w`.
    pub fn p_internal(&self, w: &Wall, p: usize) -> Vec<(usize, usize)> {
        let layers = w.layers();
        let bad: HashSet<usize> = layers.iter().take(p).flatten().copied().collect();
        self.internal
            .iter()
            .filter(|(_, bag)| bag.iter().all(|v| !bad.contains(v)))
            .map(|(&k, _)| k)
            .collect()
    }
}

/// Grows the bags of `cp` over the compass `g[compass]`: repeatedly the
/// lowest-id unassigned compass vertex with an assigned neighbour joins the
/// lowest-index bag it touches. Vertices of `g` outside the compass join the
/// external bag.
pub fn extend_partition(cp: &CanonicalPartition, g: &Graph, compass: &[usize]) -> Result<CanonicalPartition> {
    let n = g.n();
    let mut in_compass = vec![false; n];
    for &v in compass {
        if v >= n {
            return invalid(format!("compass vertex {v} out of range"));
        }
        in_compass[v] = true;
    }
    if !g.is_connected_subset(compass) {
        return invalid("compass is disconnected");
    }
    let mut owner = cp.owner(n);
    for bag in cp.bags() {
        if let Some(v) = bag.iter().find(|&&v| v >= n || !in_compass[v]) {
            return invalid(format!("wall vertex {v} is not in the compass"));
        }
    }
    let mut frontier: BTreeSet<usize> = BTreeSet::new();
    for v in 0..n {
        if owner[v].is_none() && in_compass[v] && g.neighbors(v).iter().any(|&u| owner[u].is_some()) {
            frontier.insert(v);
        }
    }
    while let Some(x) = frontier.pop_first() {
        let bag = g.neighbors(x).iter().filter_map(|&u| owner[u]).min().expect("frontier vertex has a bag");
        owner[x] = Some(bag);
        for &u in g.neighbors(x) {
            if owner[u].is_none() && in_compass[u] {
                frontier.insert(u);
            }
        }
    }
    let ext = cp.internal.len();
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); ext + 1];
    for v in 0..n {
        match owner[v] {
            Some(k) => bags[k].push(v),
            None if in_compass[v] => return invalid(format!("compass vertex {v} unreachable from the wall")),
            None => bags[ext].push(v),
        }
    }
    let external = bags.pop().unwrap();
    let internal = cp.internal.keys().copied().zip(bags).collect();
    Ok(CanonicalPartition { internal, external })
}

/// Smallest odd integer at least `x`.
pub fn odd_ceil(x: usize) -> usize {
    if x % 2 == 1 {
        x
    } else {
        x + 1
    }
}

/// `⌈√z·(x+2)⌉`, computed exactly.
fn ceil_sqrt_times(z: usize, m: usize) -> usize {
    // smallest c with c² >= z·m²
    let target = (z as u128) * (m as u128) * (m as u128);
    let mut c = ((target as f64).sqrt() as u128).saturating_sub(2);
    while c * c < target {
        c += 1;
    }
    c as usize
}

/// Height needed by [`pack_subwalls`]: `odd(⌈√z·(x+2)⌉) + 2(p+1)`.
pub fn packing_height(z: usize, x: usize, p: usize) -> usize {
    odd_ceil(ceil_sqrt_times(z, x + 2)) + 2 * (p + 1)
}

/// `z` central `x`-subwalls of `(x+2)`-blocks laid out in the central part
/// of `w`, checked to share no internal bag of `cp` and to sit inside
/// `p`-internal bags.
pub fn pack_subwalls(w: &Wall, cp: &CanonicalPartition, z: usize, x: usize, p: usize) -> Result<Vec<Wall>> {
    if z == 0 || p == 0 {
        return invalid("z and p must be positive");
    }
    odd_height(x)?;
    let need = packing_height(z, x, p);
    if w.r < need {
        return invalid(format!("packing {z} {x}-subwalls at depth {p} needs height {need}, wall has {}", w.r));
    }
    // The central region: the largest odd height leaving p+1 layers.
    let region = {
        let mut q = w.r - 2 * (p + 1);
        if q % 2 == 0 {
            q -= 1;
        }
        q
    };
    let side = x + 2;
    let cols = (1..=z).find(|c| c * c >= z).unwrap();
    let rows = z.div_ceil(cols);
    if cols * side > region || rows * side > region {
        return invalid(format!(
            "{z} blocks of height {side} do not fit in a {cols}x{rows} layout inside the central {region}-subwall"
        ));
    }
    let base = (w.r - region) / 2 + 1;
    let ox = base + (region - cols * side) / 2;
    let oy = base + (region - rows * side) / 2;
    let mut out = Vec::new();
    for k in 0..z {
        let (ci, ri) = (k % cols, k / cols);
        let block = w.subwall(ox + ci * side, oy + ri * side, side)?;
        out.push(block.central_subwall(x)?);
    }
    let owner: HashMap<usize, usize> = cp
        .internal
        .values()
        .enumerate()
        .flat_map(|(k, bag)| bag.iter().map(move |&v| (v, k)))
        .collect();
    let allowed: HashSet<(usize, usize)> = cp.p_internal(w, p).into_iter().collect();
    let keys: Vec<(usize, usize)> = cp.internal.keys().copied().collect();
    let mut bag_wall: HashMap<usize, usize> = HashMap::new();
    for (i, sub) in out.iter().enumerate() {
        for v in sub.vertices() {
            let Some(&b) = owner.get(&v) else {
                return Err(Error::ConstructionBug(format!("subwall {i} vertex {v} lies in the external bag")));
            };
            if !allowed.contains(&keys[b]) {
                return Err(Error::ConstructionBug(format!("subwall {i} meets a bag touching the first {p} layers")));
            }
            if let Some(&j) = bag_wall.get(&b) {
                if j != i {
                    return Err(Error::ConstructionBug(format!("subwalls {j} and {i} share bag {:?}", keys[b])));
                }
            }
            bag_wall.insert(b, i);
        }
    }
    Ok(out)
}

impl Serialize for Wall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
