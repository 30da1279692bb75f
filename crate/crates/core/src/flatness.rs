//! Paintings, renditions and flatness certificates.
//!
//! The disk is never drawn. A painting is its node/cell incidence structure:
//! the nodes around each cell, the cells (and the disk boundary) around
//! each node, and the boundary nodes in cyclic order. It is a painting in a
//! disk exactly when the incidence graph, with one extra vertex standing
//! for the outside of the disk joined to the boundary nodes, is a plane
//! rotation system.

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::walls::{is_tilt, Wall, WallJson};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Painting {
    pub nodes: usize,
    /// Boundary nodes of each cell, in cyclic order around the cell.
    pub cells: Vec<Vec<usize>>,
    /// Around each node, its cells in cyclic order; `null` is the disk boundary.
    pub rotation: Vec<Vec<Option<usize>>>,
    /// Nodes on the disk boundary, in cyclic order.
    pub boundary: Vec<usize>,
}

/// Incidence graph: nodes `0..n`, cells `n..n+c`, outside `n+c`.
struct Incidence {
    n: usize,
    rot: Vec<Vec<usize>>,
}

impl Incidence {
    fn outer(&self) -> usize {
        self.rot.len() - 1
    }

    fn pos(&self, x: usize, y: usize) -> Option<usize> {
        self.rot[x].iter().position(|&z| z == y)
    }
}

impl Painting {
    fn incidence(&self) -> Incidence {
        let (n, c) = (self.nodes, self.cells.len());
        let outer = n + c;
        let mut rot: Vec<Vec<usize>> = self
            .rotation
            .iter()
            .map(|r| r.iter().map(|x| x.map_or(outer, |c| n + c)).collect())
            .collect();
        rot.extend(self.cells.iter().cloned());
        rot.push(self.boundary.clone());
        Incidence { n, rot }
    }

    /// First structural problem, if any.
    pub fn defect(&self) -> Option<String> {
        let n = self.nodes;
        for (i, c) in self.cells.iter().enumerate() {
            if c.len() > 3 {
                return Some(format!("cell {i} has {} boundary nodes", c.len()));
            }
            if c.iter().any(|&v| v >= n) {
                return Some(format!("cell {i} names a missing node"));
            }
            if c.iter().collect::<HashSet<_>>().len() != c.len() {
                return Some(format!("cell {i} repeats a node"));
            }
        }
        if self.rotation.len() != n {
            return Some(format!("{} rotations for {n} nodes", self.rotation.len()));
        }
        if self.boundary.iter().any(|&v| v >= n) || self.boundary.iter().collect::<HashSet<_>>().len() != self.boundary.len() {
            return Some("boundary nodes are out of range or repeated".into());
        }
        let on_boundary: HashSet<usize> = self.boundary.iter().copied().collect();
        let mut around: Vec<Vec<Option<usize>>> = vec![Vec::new(); n];
        for (i, c) in self.cells.iter().enumerate() {
            for &v in c {
                around[v].push(Some(i));
            }
        }
        for (v, want) in around.iter_mut().enumerate() {
            if on_boundary.contains(&v) {
                want.push(None);
            }
            want.sort_unstable();
            let mut got = self.rotation[v].clone();
            got.sort_unstable();
            if got != *want {
                return Some(format!("rotation at node {v} does not list exactly its cells"));
            }
        }
        let inc = self.incidence();
        let total = inc.rot.len();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut edges = 0;
        for x in 0..total {
            for &y in &inc.rot[x] {
                edges += 1;
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
        let edges = edges / 2;
        let active: Vec<usize> = (0..total).filter(|&x| !inc.rot[x].is_empty()).collect();
        let comps: HashSet<usize> = active.iter().map(|&x| find(&mut parent, x)).collect();
        let index: HashMap<(usize, usize), usize> = (0..total)
            .flat_map(|x| inc.rot[x].iter().enumerate().map(move |(i, &y)| ((x, y), i)))
            .collect();
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut faces = 0;
        for &x in &active {
            for i in 0..inc.rot[x].len() {
                if seen.contains(&(x, i)) {
                    continue;
                }
                faces += 1;
                let (mut a, mut j) = (x, i);
                while seen.insert((a, j)) {
                    let b = inc.rot[a][j];
                    let back = index[&(b, a)];
                    j = (back + 1) % inc.rot[b].len();
                    a = b;
                }
            }
        }
        if active.len() + faces != edges + 2 * comps.len() {
            return Some("incidence rotation is not a plane drawing in a disk".into());
        }
        None
    }
}

/// A flap: a subgraph given by vertex and edge lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flap {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Flap {
    pub fn normalised(&self) -> Flap {
        let mut vertices = self.vertices.clone();
        vertices.sort_unstable();
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        Flap { vertices, edges }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendition {
    /// Cyclic order of the boundary vertices.
    pub omega: Vec<usize>,
    pub painting: Painting,
    /// Flap of each cell.
    pub sigma: Vec<Flap>,
    /// Vertex of each node.
    pub pi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatnessCertificate {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub pegs: Vec<usize>,
    pub corners: Vec<usize>,
    pub rendition: Rendition,
}

/// The condition a verdict reports as failed. Rendition axioms carry their
/// number, see [`Check::axiom`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Check {
    Painting,
    Injection,
    FlapShape,
    Cover,
    EdgeDisjoint,
    NodesInFlap,
    Sharing,
    BoundaryOrder,
    Separation,
    WallInCompass,
    PegChoice,
    PegsOnPerimeter,
    OmegaAlongPerimeter,
}

impl Check {
    pub fn axiom(self) -> Option<u8> {
        match self {
            Check::Cover => Some(1),
            Check::EdgeDisjoint => Some(2),
            Check::NodesInFlap => Some(3),
            Check::Sharing => Some(4),
            Check::BoundaryOrder => Some(5),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub failed: Option<Check>,
    pub detail: String,
}

impl Verdict {
    fn ok() -> Verdict {
        Verdict { failed: None, detail: String::new() }
    }

    fn fail(c: Check, detail: impl Into<String>) -> Verdict {
        Verdict { failed: Some(c), detail: detail.into() }
    }

    pub fn is_valid(&self) -> bool {
        self.failed.is_none()
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    match b.iter().position(|&v| v == a[0]) {
        Some(s) => (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]),
        None => false,
    }
}

/// Checks the rendition of `G[keep]`, reporting the first failure in the
/// order of [`Check`].
fn check_rendition(g: &Graph, keep: &[bool], r: &Rendition) -> Verdict {
    let p = &r.painting;
    if let Some(d) = p.defect() {
        return Verdict::fail(Check::Painting, d);
    }
    if r.pi.len() != p.nodes {
        return Verdict::fail(Check::Injection, format!("{} images for {} nodes", r.pi.len(), p.nodes));
    }
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    for (i, &v) in r.pi.iter().enumerate() {
        if v >= g.n() || !keep[v] {
            return Verdict::fail(Check::Injection, format!("node {i} maps outside the graph"));
        }
        if node_of.insert(v, i).is_some() {
            return Verdict::fail(Check::Injection, format!("vertex {v} is the image of two nodes"));
        }
    }
    if r.sigma.len() != p.cells.len() {
        return Verdict::fail(Check::FlapShape, format!("{} flaps for {} cells", r.sigma.len(), p.cells.len()));
    }
    for (c, f) in r.sigma.iter().enumerate() {
        let vs: HashSet<usize> = f.vertices.iter().copied().collect();
        if vs.len() != f.vertices.len() || f.vertices.iter().any(|&v| v >= g.n() || !keep[v]) {
            return Verdict::fail(Check::FlapShape, format!("flap {c} has repeated or foreign vertices"));
        }
        let mut es = HashSet::new();
        for &(a, b) in &f.edges {
            if !vs.contains(&a) || !vs.contains(&b) || !g.has_edge(a, b) || !es.insert(key(a, b)) {
                return Verdict::fail(Check::FlapShape, format!("flap {c} edge ({a},{b}) is not a subgraph edge"));
            }
        }
    }
    let mut in_flaps: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut edge_flap: HashMap<(usize, usize), usize> = HashMap::new();
    let mut twice = None;
    for (c, f) in r.sigma.iter().enumerate() {
        for &v in &f.vertices {
            in_flaps.entry(v).or_default().push(c);
        }
        for &(a, b) in &f.edges {
            if let Some(&c0) = edge_flap.get(&key(a, b)) {
                twice.get_or_insert((a, b, c0, c));
            }
            edge_flap.insert(key(a, b), c);
        }
    }
    for v in (0..g.n()).filter(|&v| keep[v]) {
        if !in_flaps.contains_key(&v) {
            return Verdict::fail(Check::Cover, format!("vertex {v} lies in no flap"));
        }
        for &u in g.neighbors(v) {
            if u > v && keep[u] && !edge_flap.contains_key(&(v, u)) {
                return Verdict::fail(Check::Cover, format!("edge ({v},{u}) lies in no flap"));
            }
        }
    }
    if let Some((a, b, c0, c1)) = twice {
        return Verdict::fail(Check::EdgeDisjoint, format!("edge ({a},{b}) lies in flaps {c0} and {c1}"));
    }
    for (c, nodes) in p.cells.iter().enumerate() {
        let vs: HashSet<usize> = r.sigma[c].vertices.iter().copied().collect();
        if let Some(&x) = nodes.iter().find(|&&x| !vs.contains(&r.pi[x])) {
            return Verdict::fail(Check::NodesInFlap, format!("node {x} of cell {c} maps outside its flap"));
        }
    }
    let mut shared: Vec<(&usize, &Vec<usize>)> = in_flaps.iter().filter(|(_, cs)| cs.len() > 1).collect();
    shared.sort_unstable();
    for (&v, cs) in shared {
        for &c in cs {
            let ok = node_of.get(&v).is_some_and(|x| p.cells[c].contains(x));
            if !ok {
                return Verdict::fail(Check::Sharing, format!("vertex {v} is shared by flap {c} without being one of its nodes"));
            }
        }
    }
    let image: Vec<usize> = p.boundary.iter().map(|&x| r.pi[x]).collect();
    if !same_cycle(&image, &r.omega) {
        return Verdict::fail(Check::BoundaryOrder, "boundary nodes do not follow omega");
    }
    Verdict::ok()
}

pub fn validate_rendition(g: &Graph, r: &Rendition) -> Verdict {
    check_rendition(g, &vec![true; g.n()], r)
}

pub fn validate_flatness(g: &Graph, w: &Wall, cert: &FlatnessCertificate) -> Verdict {
    let n = g.n();
    if cert.x.iter().chain(&cert.y).any(|&v| v >= n) {
        return Verdict::fail(Check::Separation, "vertex out of range");
    }
    let (xs, ys): (HashSet<usize>, HashSet<usize>) = (cert.x.iter().copied().collect(), cert.y.iter().copied().collect());
    if let Some(v) = w.vertices().into_iter().find(|v| !ys.contains(v)) {
        return Verdict::fail(Check::WallInCompass, format!("wall vertex {v} outside Y"));
    }
    if let Some(v) = (0..n).find(|v| !xs.contains(v) && !ys.contains(v)) {
        return Verdict::fail(Check::Separation, format!("vertex {v} is in neither side"));
    }
    for (a, b) in g.edges() {
        let cross = |u: usize, v: usize| !ys.contains(&u) && !xs.contains(&v);
        if cross(a, b) || cross(b, a) {
            return Verdict::fail(Check::Separation, format!("edge ({a},{b}) crosses the separation"));
        }
    }
    let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
    if set(&cert.pegs) != set(w.pegs()) || set(&cert.corners) != set(w.corners()) {
        return Verdict::fail(Check::PegChoice, "pegs and corners differ from the wall's choice");
    }
    let perim = w.perimeter();
    let on_perim: HashSet<usize> = perim.iter().copied().collect();
    let sep: BTreeSet<usize> = xs.intersection(&ys).copied().collect();
    if let Some(p) = cert.pegs.iter().find(|p| !sep.contains(p)) {
        return Verdict::fail(Check::PegsOnPerimeter, format!("peg {p} is not in X∩Y"));
    }
    if let Some(v) = sep.iter().find(|v| !on_perim.contains(v)) {
        return Verdict::fail(Check::PegsOnPerimeter, format!("X∩Y vertex {v} is off the perimeter"));
    }
    let along: Vec<usize> = perim.iter().copied().filter(|v| sep.contains(v)).collect();
    let back: Vec<usize> = along.iter().rev().copied().collect();
    let omega = &cert.rendition.omega;
    if !same_cycle(omega, &along) && !same_cycle(omega, &back) {
        return Verdict::fail(Check::OmegaAlongPerimeter, "omega is not X∩Y in perimeter order");
    }
    let mut keep = vec![false; n];
    for &v in &cert.y {
        keep[v] = true;
    }
    check_rendition(g, &keep, &cert.rendition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellClass {
    Perimetric,
    Internal,
    External,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: Vec<CellClass>,
    pub marginal: Vec<bool>,
    pub tidy: Vec<bool>,
}

impl Classification {
    pub fn count(&self, c: CellClass) -> usize {
        self.class.iter().filter(|&&x| x == c).count()
    }
}

/// Where the cycle runs through the incidence graph, and which side of it
/// (right: strictly between the in and out darts in rotation order) faces
/// the outside of the disk.
struct Curve {
    /// `(vertex, in position, out position)` per visit.
    visits: Vec<(usize, usize, usize)>,
    outer_right: bool,
}

fn tidiness(w: &Wall, cert: &FlatnessCertificate) -> Vec<bool> {
    let wall_edges: HashSet<(usize, usize)> = w.host_edges().into_iter().collect();
    let r = &cert.rendition;
    r.painting
        .cells
        .iter()
        .zip(&r.sigma)
        .map(|(nodes, f)| {
            nodes.iter().all(|&x| {
                let v = r.pi[x];
                f.edges.iter().filter(|&&(a, b)| (a == v || b == v) && wall_edges.contains(&key(a, b))).count() < 2
            })
        })
        .collect()
}

fn classify_inner(g: &Graph, w: &Wall, cert: &FlatnessCertificate, cycle: &[usize]) -> Result<(Classification, Curve)> {
    let mut keep = vec![false; g.n()];
    for &v in &cert.y {
        if v < g.n() {
            keep[v] = true;
        }
    }
    let verdict = check_rendition(g, &keep, &cert.rendition);
    if let Some(c) = verdict.failed {
        return invalid(format!("rendition fails {c:?}: {}", verdict.detail));
    }
    let r = &cert.rendition;
    let p = &r.painting;
    let k = cycle.len();
    if k < 3 || cycle.iter().collect::<HashSet<_>>().len() != k {
        return invalid("not a cycle");
    }
    let mut edge_flap: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, f) in r.sigma.iter().enumerate() {
        for &(a, b) in &f.edges {
            edge_flap.insert(key(a, b), c);
        }
    }
    let mut ec = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        match edge_flap.get(&key(a, b)) {
            Some(&c) => ec.push(c),
            None => return invalid(format!("({a},{b}) is not a compass edge")),
        }
    }
    let Some(s) = (0..k).find(|&i| ec[(i + k - 1) % k] != ec[i]) else {
        return invalid("cycle lies inside one flap, so it is not normal");
    };
    let node_of: HashMap<usize, usize> = r.pi.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Segments: (cell, first vertex, last vertex, inner vertices).
    let mut segs: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();
    for t in 0..k {
        let i = (s + t) % k;
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        match segs.last_mut() {
            Some(last) if last.0 == ec[i] => {
                last.3.push(last.2);
                last.2 = b;
            }
            _ => segs.push((ec[i], a, b, Vec::new())),
        }
    }
    let mut used = HashSet::new();
    for sg in &segs {
        if !used.insert(sg.0) {
            return Err(Error::Unsupported(format!("cycle meets flap {} in two separate segments", sg.0)));
        }
    }
    let inc = p.incidence();
    let cellv = |c: usize| inc.n + c;
    let m = segs.len();
    let mut visits = Vec::with_capacity(2 * m);
    let mut on_curve = vec![false; inc.rot.len()];
    for i in 0..m {
        let (c, a, b, _) = &segs[i];
        let prev = segs[(i + m - 1) % m].0;
        let (Some(&na), Some(&nb)) = (node_of.get(a), node_of.get(b)) else {
            return Err(Error::ConstructionBug("cycle changes flap away from a node".into()));
        };
        let pos = |x: usize, y: usize| inc.pos(x, y).ok_or_else(|| Error::ConstructionBug("curve leaves the incidence graph".into()));
        visits.push((na, pos(na, cellv(prev))?, pos(na, cellv(*c))?));
        visits.push((cellv(*c), pos(cellv(*c), na)?, pos(cellv(*c), nb)?));
        on_curve[na] = true;
        on_curve[cellv(*c)] = true;
    }
    let mut side = vec![0u8; inc.rot.len()];
    let mut queue = VecDeque::new();
    for &(x, a, b) in &visits {
        let d = inc.rot[x].len();
        let mut i = (a + 1) % d;
        let mut label = 1;
        while i != a {
            if i == b {
                label = 2;
            } else {
                let y = inc.rot[x][i];
                if !on_curve[y] {
                    if side[y] != 0 && side[y] != label {
                        return Err(Error::ConstructionBug("cycle does not separate the disk".into()));
                    }
                    if side[y] == 0 {
                        side[y] = label;
                        queue.push_back(y);
                    }
                }
            }
            i = (i + 1) % d;
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &inc.rot[x] {
            if on_curve[y] {
                continue;
            }
            if side[y] == 0 {
                side[y] = side[x];
                queue.push_back(y);
            } else if side[y] != side[x] {
                return Err(Error::ConstructionBug("cycle does not separate the disk".into()));
            }
        }
    }
    let outer_side = side[inc.outer()];
    if outer_side == 0 {
        return invalid("the cycle's component does not reach the disk boundary");
    }
    let inner_side = 3 - outer_side;
    let tidy = tidiness(w, cert);
    let cells = p.cells.len();
    let mut class = vec![CellClass::External; cells];
    for c in 0..cells {
        if on_curve[cellv(c)] {
            class[c] = CellClass::Perimetric;
        } else if side[cellv(c)] == inner_side {
            class[c] = CellClass::Internal;
        }
    }
    let mut marginal = vec![false; cells];
    for (c, a, b, inner) in &segs {
        let nodes = &p.cells[*c];
        if nodes.len() != 3 || !tidy[*c] {
            continue;
        }
        let (na, nb) = (node_of[a], node_of[b]);
        let Some(&z) = nodes.iter().find(|&&x| x != na && x != nb) else { continue };
        if inner.contains(&r.pi[z]) {
            continue;
        }
        let x = cellv(*c);
        let d = nodes.len();
        let (pa, pb, pz) = (inc.pos(x, na).unwrap(), inc.pos(x, nb).unwrap(), inc.pos(x, z).unwrap());
        let right = (pz + d - pa) % d < (pb + d - pa) % d;
        marginal[*c] = right == (outer_side == 1);
    }
    Ok((Classification { class, marginal, tidy }, Curve { visits, outer_right: outer_side == 1 }))
}

/// Perimetric / internal / external labels of every cell with respect to a
/// normal cycle of the compass, with marginality and tidiness.
pub fn classify_cells(g: &Graph, w: &Wall, cert: &FlatnessCertificate, cycle: &[usize]) -> Result<Classification> {
    classify_inner(g, w, cert, cycle).map(|x| x.0)
}

/// Cells whose flaps form the influence of `cycle`: all cells that are not external.
pub fn influence(g: &Graph, w: &Wall, cert: &FlatnessCertificate, cycle: &[usize]) -> Result<Vec<usize>> {
    let cls = classify_cells(g, w, cert, cycle)?;
    Ok((0..cls.class.len()).filter(|&c| cls.class[c] != CellClass::External).collect())
}

/// `G[Y]` with the map from its ids to host ids.
pub fn compass(g: &Graph, cert: &FlatnessCertificate) -> (Graph, Vec<usize>) {
    let mut y = cert.y.clone();
    y.sort_unstable();
    y.dedup();
    (g.induced(&y), y)
}

/// Base of each flap: its vertices that are images of nodes.
pub fn flap_bases(cert: &FlatnessCertificate) -> Vec<Vec<usize>> {
    let images: HashSet<usize> = cert.rendition.pi.iter().copied().collect();
    cert.rendition
        .sigma
        .iter()
        .map(|f| {
            let mut b: Vec<usize> = f.vertices.iter().copied().filter(|v| images.contains(v)).collect();
            b.sort_unstable();
            b
        })
        .collect()
}

/// No cell is external or marginal with respect to the perimeter, and none is untidy.
pub fn is_regular(g: &Graph, w: &Wall, cert: &FlatnessCertificate) -> Result<bool> {
    let cls = classify_cells(g, w, cert, &w.perimeter())?;
    Ok(cls.count(CellClass::External) == 0 && !cls.marginal.contains(&true) && cls.tidy.iter().all(|&t| t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tilt {
    pub wall: Wall,
    pub certificate: FlatnessCertificate,
}

/// A tilt of `(w, cert)` at the subwall `sub` for plane compasses: the cells
/// outside `D(sub)` are dropped and the disk is cut down to the rest.
/// Certificates outside this class (marginal perimetric cells, compass
/// edges outside the influence) give [`Error::Unsupported`].
pub fn compute_tilt(g: &Graph, w: &Wall, cert: &FlatnessCertificate, sub: &Wall) -> Result<Tilt> {
    let v = validate_flatness(g, w, cert);
    if let Some(c) = v.failed {
        return invalid(format!("certificate fails {c:?}: {}", v.detail));
    }
    if !sub.is_subwall_of(w) {
        return invalid("tilts are taken at subwalls");
    }
    let perim = sub.perimeter();
    let (cls, curve) = classify_inner(g, w, cert, &perim)?;
    let r = &cert.rendition;
    let p = &r.painting;
    let kept: Vec<usize> = (0..p.cells.len()).filter(|&c| cls.class[c] != CellClass::External).collect();
    if kept.iter().any(|&c| cls.marginal[c]) {
        return Err(Error::Unsupported("a perimetric cell is marginal".into()));
    }
    let mut ynew = BTreeSet::new();
    let mut covered = HashSet::new();
    for &c in &kept {
        ynew.extend(r.sigma[c].vertices.iter().copied());
        covered.extend(r.sigma[c].edges.iter().map(|&(a, b)| key(a, b)));
    }
    let mut sep: BTreeSet<usize> = BTreeSet::new();
    for &v in &ynew {
        for &u in g.neighbors(v) {
            if !covered.contains(&key(u, v)) {
                if ynew.contains(&u) {
                    return Err(Error::Unsupported(format!("compass edge ({u},{v}) lies outside the influence")));
                }
                sep.insert(v);
            }
        }
    }
    sep.extend(sub.pegs().iter().copied());
    let on_perim: HashSet<usize> = perim.iter().copied().collect();
    if let Some(v) = sep.iter().find(|v| !on_perim.contains(v)) {
        return Err(Error::Unsupported(format!("vertex {v} would join the boundary off the perimeter")));
    }
    let node_of: HashMap<usize, usize> = r.pi.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let is_kept: HashSet<usize> = kept.iter().copied().collect();
    let mut old_nodes: BTreeSet<usize> = kept.iter().flat_map(|&c| p.cells[c].iter().copied()).collect();
    for v in &sep {
        match node_of.get(v) {
            Some(&x) => {
                old_nodes.insert(x);
            }
            None => return Err(Error::Unsupported(format!("boundary vertex {v} is not a node"))),
        }
    }
    let renum: HashMap<usize, usize> = old_nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let cell_renum: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let curve_at: HashMap<usize, (usize, usize)> =
        curve.visits.iter().filter(|v| v.0 < p.nodes).map(|&(x, a, b)| (x, (a, b))).collect();
    let mut rotation = Vec::with_capacity(old_nodes.len());
    for &x in &old_nodes {
        let old = &p.rotation[x];
        let mut rot: Vec<Option<usize>> = Vec::new();
        let boundary = sep.contains(&r.pi[x]);
        let cut_after: Option<usize> = if !boundary {
            None
        } else if let Some(&(a, b)) = curve_at.get(&x) {
            Some(if curve.outer_right { a } else { b })
        } else {
            let gone: Vec<bool> = old.iter().map(|e| e.is_none_or(|c| !is_kept.contains(&c))).collect();
            let starts: Vec<usize> = (0..old.len()).filter(|&i| gone[i] && !gone[(i + old.len() - 1) % old.len()]).collect();
            match starts.as_slice() {
                [s] => Some((s + old.len() - 1) % old.len()),
                _ => return Err(Error::Unsupported(format!("node {x} has no single outside wedge"))),
            }
        };
        for (i, e) in old.iter().enumerate() {
            if let Some(c) = e {
                if let Some(&nc) = cell_renum.get(c) {
                    rot.push(Some(nc));
                }
            }
            if cut_after == Some(i) {
                rot.push(None);
            }
        }
        rotation.push(rot);
    }
    let cells: Vec<Vec<usize>> = kept.iter().map(|&c| p.cells[c].iter().map(|x| renum[x]).collect()).collect();
    let along: Vec<usize> = perim.iter().filter(|v| sep.contains(v)).map(|v| renum[&node_of[v]]).collect();
    let mut painting = Painting { nodes: old_nodes.len(), cells, rotation, boundary: along.clone() };
    if painting.defect().is_some() {
        painting.boundary.reverse();
        if let Some(d) = painting.defect() {
            return Err(Error::ConstructionBug(format!("tilted painting: {d}")));
        }
    }
    let pi: Vec<usize> = old_nodes.iter().map(|&x| r.pi[x]).collect();
    let omega = painting.boundary.iter().map(|&x| pi[x]).collect();
    let rendition = Rendition { omega, painting, sigma: kept.iter().map(|&c| r.sigma[c].clone()).collect(), pi };
    let x: Vec<usize> = (0..g.n()).filter(|v| !ynew.contains(v) || sep.contains(v)).collect();
    let certificate = FlatnessCertificate {
        x,
        y: ynew.into_iter().collect(),
        pegs: sub.pegs().to_vec(),
        corners: sub.corners().to_vec(),
        rendition,
    };
    let v = validate_flatness(g, sub, &certificate);
    if let Some(c) = v.failed {
        return Err(Error::ConstructionBug(format!("tilt fails {c:?}: {}", v.detail)));
    }
    Ok(Tilt { wall: sub.clone(), certificate })
}

/// The five tilt conditions, in order: no external cells, tilted wall has
/// the interior of `sub`, internal cells and their flaps unchanged, new
/// compass inside the old influence, new cells have at most two nodes.
pub fn tilt_conditions(g: &Graph, w: &Wall, cert: &FlatnessCertificate, sub: &Wall, t: &Tilt) -> Result<[bool; 5]> {
    let old = classify_cells(g, w, cert, &sub.perimeter())?;
    let new = classify_cells(g, &t.wall, &t.certificate, &t.wall.perimeter())?;
    let flaps = |c: &FlatnessCertificate, cls: &Classification, want: CellClass| -> BTreeSet<Flap> {
        (0..cls.class.len()).filter(|&i| cls.class[i] == want).map(|i| c.rendition.sigma[i].normalised()).collect()
    };
    let no_external = new.count(CellClass::External) == 0;
    let same_interior = is_tilt(&t.wall, sub);
    let same_internal = flaps(cert, &old, CellClass::Internal) == flaps(&t.certificate, &new, CellClass::Internal);
    let mut infl_v = HashSet::new();
    let mut infl_e = HashSet::new();
    for c in (0..old.class.len()).filter(|&c| old.class[c] != CellClass::External) {
        infl_v.extend(cert.rendition.sigma[c].vertices.iter().copied());
        infl_e.extend(cert.rendition.sigma[c].edges.iter().map(|&(a, b)| key(a, b)));
    }
    let (cg, map) = compass(g, &t.certificate);
    let inside = map.iter().all(|v| infl_v.contains(v))
        && cg.edges().into_iter().all(|(a, b)| infl_e.contains(&key(map[a], map[b])));
    let signature = |c: &FlatnessCertificate, i: usize| {
        let r = &c.rendition;
        let mut base: Vec<usize> = r.painting.cells[i].iter().map(|&x| r.pi[x]).collect();
        base.sort_unstable();
        (r.sigma[i].normalised(), base)
    };
    let before: HashSet<_> = (0..cert.rendition.sigma.len()).map(|i| signature(cert, i)).collect();
    let small_new = (0..t.certificate.rendition.sigma.len())
        .all(|i| before.contains(&signature(&t.certificate, i)) || t.certificate.rendition.painting.cells[i].len() <= 2);
    Ok([no_external, same_interior, same_internal, inside, small_new])
}

/// Graph, wall and certificate in one document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatnessDocument {
    pub graph: Graph,
    pub wall: WallJson,
    pub certificate: FlatnessCertificate,
}

impl FlatnessDocument {
    pub fn new(graph: Graph, wall: &Wall, certificate: FlatnessCertificate) -> Self {
        FlatnessDocument { graph, wall: wall.to_json(), certificate }
    }

    pub fn wall(&self) -> Result<Wall> {
        Wall::from_json(&self.wall)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn angle(from: (f64, f64), to: (f64, f64)) -> f64 {
    (to.1 - from.1).atan2(to.0 - from.0)
}

/// Midpoint of the counter-clockwise wedge from `a` to `b`.
fn wedge_mid(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let span = (b - a).rem_euclid(tau);
    a + span / 2.0
}

fn in_wedge(a: f64, b: f64, t: f64) -> bool {
    let tau = std::f64::consts::TAU;
    let (span, off) = ((b - a).rem_euclid(tau), (t - a).rem_euclid(tau));
    off > 0.0 && off < span
}

/// A random plane compass around an `r`-wall with its certificate. Template
/// edges are subdivided once with probability `subdiv_p`; each brick gets
/// a flap (a chord, or a vertex on three brick vertices with an optional
/// pendant) with probability `flap_p`. One vertex outside the compass sees
/// every peg. Every cell is a wall edge or a flap; wall vertices are the nodes.
pub fn plane_fixture<R: Rng>(r: usize, subdiv_p: f64, flap_p: f64, rng: &mut R) -> Result<FlatnessDocument> {
    let base = crate::walls::build_elementary_wall(r)?;
    let mut subdiv = BTreeMap::new();
    for (u, v) in base.graph().edges() {
        if rng.gen_bool(subdiv_p) {
            subdiv.insert((u, v), 1);
        }
    }
    let w = Wall::with_subdivisions(r, subdiv)?;
    let wg = w.graph();
    let pos = w.layout();
    let wn = wg.n();
    let mut g = wg.clone();
    let mut nodes_of_cell: Vec<Vec<usize>> = Vec::new();
    let mut sigma: Vec<Flap> = Vec::new();
    let mut cell_pos: Vec<(f64, f64)> = Vec::new();
    for (u, v) in wg.edges() {
        nodes_of_cell.push(vec![u, v]);
        sigma.push(Flap { vertices: vec![u, v], edges: vec![(u, v)] });
        cell_pos.push(((pos[u].0 + pos[v].0) / 2.0, (pos[u].1 + pos[v].1) / 2.0));
    }
    let bricks = w.bricks();
    let centroid = |b: &[usize]| {
        let (sx, sy) = b.iter().fold((0.0, 0.0), |acc, &v| (acc.0 + pos[v].0, acc.1 + pos[v].1));
        (sx / b.len() as f64, sy / b.len() as f64)
    };
    for b in &bricks {
        if !rng.gen_bool(flap_p) {
            continue;
        }
        let len = b.len();
        let c = centroid(b);
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..len);
            let j = (i + rng.gen_range(2..len - 1)) % len;
            let (a, bb) = (b[i], b[j]);
            g.add_edge(a, bb)?;
            nodes_of_cell.push(vec![a, bb]);
            sigma.push(Flap { vertices: vec![a, bb], edges: vec![key(a, bb)] });
        } else {
            let picks = rand::seq::index::sample(rng, len, 3).into_vec();
            let att: Vec<usize> = picks.iter().map(|&i| b[i]).collect();
            let f = g.add_vertex();
            let mut vertices = att.clone();
            vertices.push(f);
            let mut edges: Vec<(usize, usize)> = att.iter().map(|&a| key(a, f)).collect();
            for &a in &att {
                g.add_edge(a, f)?;
            }
            if rng.gen_bool(0.5) {
                let t = g.add_vertex();
                g.add_edge(f, t)?;
                vertices.push(t);
                edges.push(key(f, t));
            }
            nodes_of_cell.push(att);
            sigma.push(Flap { vertices, edges });
        }
        cell_pos.push(c);
    }
    let hub = g.add_vertex();
    for &p in w.pegs() {
        g.add_edge(hub, p)?;
    }

    // Outer wedge at each peg: the one between its perimeter neighbours that
    // holds neither its other edges nor a brick centre.
    let perim = w.perimeter();
    let k = perim.len();
    let mut outer_angle: HashMap<usize, f64> = HashMap::new();
    for (i, &v) in perim.iter().enumerate() {
        if !w.pegs().contains(&v) {
            continue;
        }
        let (a, b) = (perim[(i + k - 1) % k], perim[(i + 1) % k]);
        let (ta, tb) = (angle(pos[v], pos[a]), angle(pos[v], pos[b]));
        let mut probes: Vec<f64> = wg.neighbors(v).iter().filter(|&&u| u != a && u != b).map(|&u| angle(pos[v], pos[u])).collect();
        probes.extend(bricks.iter().filter(|br| br.contains(&v)).map(|br| angle(pos[v], centroid(br))));
        let t = if probes.iter().any(|&t| in_wedge(ta, tb, t)) { wedge_mid(tb, ta) } else { wedge_mid(ta, tb) };
        outer_angle.insert(v, t);
    }
    let mut around: Vec<Vec<(f64, Option<usize>)>> = vec![Vec::new(); wn];
    for (c, ns) in nodes_of_cell.iter().enumerate() {
        for &v in ns {
            around[v].push((angle(pos[v], cell_pos[c]), Some(c)));
        }
    }
    for (&v, &t) in &outer_angle {
        around[v].push((t, None));
    }
    let rotation: Vec<Vec<Option<usize>>> = around
        .into_iter()
        .map(|mut a| {
            a.sort_by(|x, y| x.0.total_cmp(&y.0));
            a.into_iter().map(|x| x.1).collect()
        })
        .collect();
    let cells: Vec<Vec<usize>> = nodes_of_cell
        .iter()
        .enumerate()
        .map(|(c, ns)| {
            let mut ns = ns.clone();
            ns.sort_by(|&x, &y| angle(cell_pos[c], pos[x]).total_cmp(&angle(cell_pos[c], pos[y])));
            ns
        })
        .collect();
    let along: Vec<usize> = perim.iter().copied().filter(|v| w.pegs().contains(v)).collect();
    let mut painting = Painting { nodes: wn, cells, rotation, boundary: along };
    if painting.defect().is_some() {
        painting.boundary.reverse();
        if let Some(d) = painting.defect() {
            return Err(Error::ConstructionBug(format!("fixture painting: {d}")));
        }
    }
    let pi: Vec<usize> = (0..wn).collect();
    let omega = painting.boundary.clone();
    let mut x: Vec<usize> = w.pegs().to_vec();
    x.push(hub);
    x.sort_unstable();
    let y: Vec<usize> = (0..g.n()).filter(|&v| v != hub).collect();
    let certificate = FlatnessCertificate {
        x,
        y,
        pegs: w.pegs().to_vec(),
        corners: w.corners().to_vec(),
        rendition: Rendition { omega, painting, sigma, pi },
    };
    Ok(FlatnessDocument::new(g, &w, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixture(r: usize, seed: u64, sp: f64, fp: f64) -> (Graph, Wall, FlatnessCertificate) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = plane_fixture(r, sp, fp, &mut rng).unwrap();
        let w = d.wall().unwrap();
        (d.graph, w, d.certificate)
    }

    #[test]
    fn fixtures_validate_and_are_regular() {
        for (r, seed) in [(3, 1), (5, 2), (7, 3)] {
            let (g, w, c) = fixture(r, seed, 0.3, 0.6);
            let v = validate_flatness(&g, &w, &c);
            assert!(v.is_valid(), "{v:?}");
            assert!(is_regular(&g, &w, &c).unwrap());
            let cls = classify_cells(&g, &w, &c, &w.perimeter()).unwrap();
            assert_eq!(cls.count(CellClass::External), 0);
        }
    }

    #[test]
    fn wall_vertex_outside_y_rejected() {
        let (g, w, mut c) = fixture(3, 4, 0.0, 0.0);
        let v = w.vertices()[5];
        c.y.retain(|&u| u != v);
        assert_eq!(validate_flatness(&g, &w, &c).failed, Some(Check::WallInCompass));
    }

    #[test]
    fn permuted_omega_fails_axiom_five() {
        let (g, w, mut c) = fixture(5, 5, 0.0, 0.5);
        c.rendition.omega.swap(0, 1);
        let v = validate_flatness(&g, &w, &c);
        assert!(matches!(v.failed, Some(Check::OmegaAlongPerimeter) | Some(Check::BoundaryOrder)));
        assert_eq!(validate_rendition(&compass_graph(&g, &c), &relabel(&c)).failed.and_then(Check::axiom), Some(5));
    }

    fn compass_graph(g: &Graph, c: &FlatnessCertificate) -> Graph {
        compass(g, c).0
    }

    fn relabel(c: &FlatnessCertificate) -> Rendition {
        let map: HashMap<usize, usize> = {
            let mut y = c.y.clone();
            y.sort_unstable();
            y.into_iter().enumerate().map(|(i, v)| (v, i)).collect()
        };
        let r = &c.rendition;
        Rendition {
            omega: r.omega.iter().map(|v| map[v]).collect(),
            painting: r.painting.clone(),
            sigma: r
                .sigma
                .iter()
                .map(|f| Flap {
                    vertices: f.vertices.iter().map(|v| map[v]).collect(),
                    edges: f.edges.iter().map(|&(a, b)| (map[&a], map[&b])).collect(),
                })
                .collect(),
            pi: r.pi.iter().map(|v| map[v]).collect(),
        }
    }

    #[test]
    fn doubled_edge_fails_axiom_two() {
        let (g, w, mut c) = fixture(3, 6, 0.0, 0.0);
        let e = c.rendition.sigma[0].edges[0];
        let f = &mut c.rendition.sigma[1];
        for v in [e.0, e.1] {
            if !f.vertices.contains(&v) {
                f.vertices.push(v);
            }
        }
        f.edges.push(e);
        assert_eq!(validate_flatness(&g, &w, &c).failed, Some(Check::EdgeDisjoint));
    }

    #[test]
    fn disjoint_bricks_share_no_perimetric_cell() {
        let (g, w, c) = fixture(5, 7, 0.2, 0.7);
        let bricks = w.bricks();
        let mut checked = 0;
        for i in 0..bricks.len() {
            for j in i + 1..bricks.len() {
                let a: HashSet<_> = bricks[i].iter().collect();
                if bricks[j].iter().any(|v| a.contains(v)) {
                    continue;
                }
                let ci = classify_cells(&g, &w, &c, &bricks[i]).unwrap();
                let cj = classify_cells(&g, &w, &c, &bricks[j]).unwrap();
                for k in 0..ci.class.len() {
                    assert!(!(ci.class[k] == CellClass::Perimetric && cj.class[k] == CellClass::Perimetric));
                }
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn inner_brick_influence_excludes_perimeter() {
        let (g, w, c) = fixture(5, 8, 0.0, 0.5);
        let sub = w.central_subwall(3).unwrap();
        let inf: HashSet<usize> = influence(&g, &w, &c, &sub.perimeter()).unwrap().into_iter().collect();
        let outer_edge = w.perimeter();
        let e = key(outer_edge[0], outer_edge[1]);
        let cell = c.rendition.sigma.iter().position(|f| f.edges.contains(&e)).unwrap();
        assert!(!inf.contains(&cell));
        assert!(flap_bases(&c).iter().all(|b| b.len() <= 3));
    }

    #[test]
    fn tilt_at_central_subwall() {
        let (g, w, c) = fixture(7, 9, 0.3, 0.6);
        let sub = w.central_subwall(3).unwrap();
        let t = compute_tilt(&g, &w, &c, &sub).unwrap();
        assert!(validate_flatness(&g, &t.wall, &t.certificate).is_valid());
        assert_eq!(tilt_conditions(&g, &w, &c, &sub, &t).unwrap(), [true; 5]);
        assert!(is_regular(&g, &t.wall, &t.certificate).unwrap());
        let ys: HashSet<usize> = t.certificate.y.iter().copied().collect();
        assert!(sub.central_vertices().iter().all(|v| ys.contains(v)));
        let same = compute_tilt(&g, &w, &c, &w).unwrap();
        assert_eq!(same.certificate.rendition.sigma.len(), c.rendition.sigma.len());
    }

    #[test]
    fn merged_cell_is_untidy() {
        let (g, w, mut c) = fixture(3, 10, 1.0, 0.0);
        let r = &mut c.rendition;
        let x = (0..r.painting.nodes)
            .find(|&x| r.painting.rotation[x].len() == 2 && r.painting.rotation[x].iter().all(Option::is_some))
            .expect("a plain degree-two node");
        let (c1, c2) = (r.painting.rotation[x][0].unwrap(), r.painting.rotation[x][1].unwrap());
        let (lo, hi) = (c1.min(c2), c1.max(c2));
        let other = |cell: usize| *r.painting.cells[cell].iter().find(|&&y| y != x).unwrap();
        let (a, b) = (other(lo), other(hi));
        let removed = r.sigma.remove(hi);
        r.sigma[lo].vertices = vec![a, x, b];
        r.sigma[lo].edges.extend(removed.edges);
        r.painting.cells.remove(hi);
        r.painting.rotation[x].retain(|e| *e != Some(hi));
        for rot in r.painting.rotation.iter_mut() {
            for k in rot.iter_mut().flatten() {
                if *k == hi {
                    *k = lo;
                } else if *k > hi {
                    *k -= 1;
                }
            }
        }
        for order in [[a, x, b], [a, b, x]] {
            r.painting.cells[lo] = order.to_vec();
            if r.painting.defect().is_none() {
                break;
            }
        }
        let v = validate_flatness(&g, &w, &c);
        assert!(v.is_valid(), "{v:?}");
        let cls = classify_cells(&g, &w, &c, &w.perimeter()).unwrap();
        assert!(!cls.tidy[lo]);
        assert!(!is_regular(&g, &w, &c).unwrap());
    }

    #[test]
    fn json_round_trip_keeps_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let d = plane_fixture(5, 0.2, 0.5, &mut rng).unwrap();
        let back = FlatnessDocument::from_json(&d.to_json()).unwrap();
        let (w1, w2) = (d.wall().unwrap(), back.wall().unwrap());
        assert_eq!(validate_flatness(&d.graph, &w1, &d.certificate), validate_flatness(&back.graph, &w2, &back.certificate));
    }

    #[test]
    fn bad_painting_is_caught() {
        let (g, w, mut c) = fixture(3, 13, 0.0, 0.0);
        let rot = &mut c.rendition.painting.rotation;
        let x = (0..rot.len()).find(|&x| rot[x].len() >= 3).unwrap();
        rot[x].swap(0, 1);
        assert_eq!(validate_flatness(&g, &w, &c).failed, Some(Check::Painting));
    }
}
