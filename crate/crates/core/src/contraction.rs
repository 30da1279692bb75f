//! Grid contractions: panchromatic trees over a coloured middle path,
//! pigeonhole selection of scattered full collections, and complete apex
//! grids extracted as apex-fixed contractions.
//!
//! Coordinates are those of [`crate::grid`]: `(x, y)` with `x` the column.
//! Row offsets are measured from the middle row.

use crate::error::{invalid, Budget, Error, Result};
use crate::graph::{is_planar, ContractionWitness, Graph};
use crate::grid::{build_grid, is_scattered, GridShape, PartiallyTriangulatedGrid};
use crate::minor::family_model;
use crate::util::subsets_up_to;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

fn bug<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ConstructionBug(msg.into()))
}

const FREE: usize = usize::MAX;

/// Sets of `r` middle-path vertices each, `h` of them, pairwise more than
/// `d` apart along the path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredCollection {
    pub sets: Vec<Vec<usize>>,
    pub r: usize,
    pub h: usize,
    pub d: usize,
}

impl ScatteredCollection {
    pub fn new(sets: Vec<Vec<usize>>, r: usize, d: usize) -> Self {
        let h = sets.len();
        ScatteredCollection { sets, r, h, d }
    }

    pub fn is_valid_in(&self, path: &[usize]) -> bool {
        is_scattered(&self.sets, path, self.r, self.h, self.d)
    }
}

pub fn verify_witness(source: &Graph, witness: &ContractionWitness, fixed: &[usize]) -> bool {
    witness.violation(source, fixed).is_none()
}

/// Multi-source BFS: every unowned vertex joins the set of the owned vertex
/// that reaches it first. Seeds are taken in id order.
fn absorb(g: &Graph, owner: &mut [usize]) {
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&v| owner[v] != FREE).collect();
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if owner[u] == FREE {
                owner[u] = owner[v];
                queue.push_back(u);
            }
        }
    }
}

fn quotient(g: &Graph, owner: &[usize], t: usize) -> Result<ContractionWitness> {
    let mut sets = vec![Vec::new(); t];
    for (v, &o) in owner.iter().enumerate() {
        if o == FREE {
            return bug(format!("vertex {v} left outside every branch set"));
        }
        sets[o].push(v);
    }
    let mut target = Graph::new(t);
    for (u, v) in g.edges() {
        if owner[u] != owner[v] {
            target.add_edge(owner[u], owner[v])?;
        }
    }
    Ok(ContractionWitness { target, branch_sets: sets })
}

/// Smallest host width for which an `(r², a, d)`-scattered collection and
/// the tree construction both fit.
pub fn min_panchromatic_n(r: usize, a: usize, d: usize) -> usize {
    let r2 = r * r;
    let bound = r2 * a + a.saturating_sub(1) * d;
    let spread = (a * r2).saturating_sub(1) * (d + 1) + 1;
    bound.max(spread)
}

pub fn min_panchromatic_m(r: usize) -> usize {
    2 * (r * r + r + 1) + 1
}

#[derive(Clone, Debug, Serialize)]
pub struct Panchromatic {
    pub witness: ContractionWitness,
    /// The target as a grid; `witness.target` is its graph.
    pub grid: PartiallyTriangulatedGrid,
    /// The rerouted trees, in the order of their `x`-extremes.
    pub trees: Vec<Vec<usize>>,
}

/// Contracts `host` onto an `r`-grid whose every branch set meets every set
/// of `c`. `c` must be `(r², a, d)`-scattered in the middle path with
/// `d ≥ 2r²`.
pub fn panchromatic_contract(host: &PartiallyTriangulatedGrid, c: &ScatteredCollection, r: usize) -> Result<Panchromatic> {
    let (a, d) = (c.h, c.d);
    if r == 0 || a == 0 {
        return invalid("r and the number of colours must be positive");
    }
    let r2 = r * r;
    if c.r != r2 || c.sets.len() != a {
        return invalid(format!("collection must hold {a} sets of size {r2}"));
    }
    if d < 2 * r2 {
        return invalid(format!("d = {d} is below 2r² = {}", 2 * r2));
    }
    let sh = host.shape();
    let (n, m) = (sh.k, sh.r);
    if n < min_panchromatic_n(r, a, d) {
        return invalid(format!("width {n} below the minimum {}", min_panchromatic_n(r, a, d)));
    }
    if m < min_panchromatic_m(r) {
        return invalid(format!("height {m} below the minimum {}", min_panchromatic_m(r)));
    }
    if !c.is_valid_in(&sh.middle_path()) {
        return invalid("collection is not scattered in the middle path");
    }
    let mid = sh.middle_row() as i64;
    let at = |x: usize, off: i64| sh.id(x, (mid + off) as usize);

    let pos: Vec<Vec<usize>> = c
        .sets
        .iter()
        .map(|s| {
            let mut p: Vec<usize> = s.iter().map(|&v| sh.coords(v).0).collect();
            p.sort_unstable();
            p
        })
        .collect();
    let xs: Vec<Vec<usize>> = (0..r2).map(|j| pos.iter().map(|p| p[j]).collect()).collect();
    let left: Vec<usize> = xs.iter().map(|x| *x.iter().min().unwrap()).collect();
    let right: Vec<usize> = xs.iter().map(|x| *x.iter().max().unwrap()).collect();
    let top = r2 as i64 + 1;

    let mut trees = Vec::with_capacity(r2);
    for j in 0..r2 {
        let level = (j + 1) as i64;
        let mut t = BTreeSet::new();
        for &x in &xs[j] {
            for o in 0..=level {
                t.insert(at(x, o));
            }
        }
        for x in left[j]..=right[j] {
            t.insert(at(x, level));
        }
        for o in level..=top {
            t.insert(at(left[j], o));
        }
        for o in -top..=0 {
            t.insert(at(right[j], o));
        }
        // Detour under every crossing with a later tree.
        let depth = r2 - (j + 1);
        let crossings: BTreeSet<usize> = xs[j + 1..].iter().flatten().copied().filter(|&h| h < right[j]).collect();
        for &h in &crossings {
            if h <= depth || h + depth > n {
                return bug(format!("detour around column {h} leaves the grid"));
            }
            let (hl, hr) = (h - depth, h + depth);
            for x in hl..=hr {
                t.remove(&at(x, level));
            }
            for o in -(depth as i64)..=level {
                t.insert(at(hl, o));
                t.insert(at(hr, o));
            }
            for x in hl..=hr {
                t.insert(at(x, -(depth as i64)));
            }
        }
        trees.push(t.into_iter().collect::<Vec<_>>());
    }

    let g = host.graph();
    let mut tree_of = vec![FREE; sh.n()];
    for (j, t) in trees.iter().enumerate() {
        for &v in t {
            if tree_of[v] != FREE {
                return bug(format!("trees {} and {} share vertex {v}", tree_of[v] + 1, j + 1));
            }
            tree_of[v] = j;
        }
        if !g.is_connected_subset(t) {
            return bug(format!("tree {} is disconnected", j + 1));
        }
    }

    // Combs: arches above (odd blocks) or below (even blocks) the trees,
    // nested so that arch j sits r-j+1 rows beyond the tree endpoints.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for i in 1..r {
        let up = i % 2 == 1;
        let sign: i64 = if up { 1 } else { -1 };
        let q = |t: usize| if up { left[t] } else { right[t] };
        for j in 1..=r {
            let (ta, tb) = ((i - 1) * r + j - 1, (i + 1) * r - j);
            let height = top + (r - j + 1) as i64;
            let mut p: Vec<usize> = (top..=height).map(|o| at(q(ta), sign * o)).collect();
            p.extend((q(ta) + 1..=q(tb)).map(|x| at(x, sign * height)));
            p.extend((top..height).rev().map(|o| at(q(tb), sign * o)));
            paths.push(p);
        }
        for (lo, hi) in [((i - 1) * r, i * r - 1), (i * r, (i + 1) * r - 1)] {
            paths.push((q(lo)..=q(hi)).map(|x| at(x, sign * top)).collect());
        }
    }
    let mut owner = tree_of.clone();
    let mut on_comb = vec![false; sh.n()];
    let mut skeleton: BTreeSet<(usize, usize)> = BTreeSet::new();
    for p in &paths {
        let Some(&first) = p.first() else { continue };
        if tree_of[first] == FREE || tree_of[*p.last().unwrap()] == FREE {
            return bug("comb path does not start and end on trees");
        }
        let mut prev = tree_of[first];
        for &v in &p[1..] {
            if tree_of[v] != FREE {
                if tree_of[v] != prev {
                    skeleton.insert((prev.min(tree_of[v]), prev.max(tree_of[v])));
                }
                prev = tree_of[v];
            } else {
                if on_comb[v] {
                    return bug(format!("comb paths share vertex {v}"));
                }
                on_comb[v] = true;
                owner[v] = prev;
            }
        }
    }

    // Tree j becomes grid vertex w_{i,e}: snake order through the columns.
    let gs = GridShape::new(r, r);
    let label = |t: usize| {
        let (i, e) = (t / r + 1, t % r + 1);
        let y = if i % 2 == 1 { e } else { r - e + 1 };
        gs.id(i, y)
    };
    let got: BTreeSet<(usize, usize)> = skeleton
        .iter()
        .map(|&(s, t)| {
            let (u, v) = (label(s), label(t));
            (u.min(v), u.max(v))
        })
        .collect();
    let want: BTreeSet<(usize, usize)> = build_grid(r, r).edges().into_iter().collect();
    if got != want {
        return bug("trees and combs do not form an r-grid");
    }

    for o in owner.iter_mut() {
        if *o != FREE {
            *o = label(*o);
        }
    }
    absorb(&g, &mut owner);
    let witness = quotient(&g, &owner, r2)?;
    if let Some(why) = witness.violation(&g, &[]) {
        return bug(format!("panchromatic witness invalid: {why}"));
    }
    for (t, set) in witness.branch_sets.iter().enumerate() {
        let hit: HashSet<usize> = set.iter().copied().collect();
        if let Some(i) = c.sets.iter().position(|s| !s.iter().any(|v| hit.contains(v))) {
            return bug(format!("branch set {t} misses colour {i}"));
        }
    }
    let grid = PartiallyTriangulatedGrid::from_graph_trusted(r, r, &witness.target)
        .or_else(|e| bug(format!("target is not a grid: {e}")))?;
    if r <= 4 && !is_planar(&witness.target) {
        return bug("target is not planar");
    }
    let mut trees_out = trees;
    for t in trees_out.iter_mut() {
        t.sort_unstable();
    }
    Ok(Panchromatic { witness, grid, trees: trees_out })
}

/// Derived sizes for [`select_scattered`] with `a` sets and grid order `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionParams {
    pub r: usize,
    pub a: usize,
    /// Height of the strip (and scatter distance).
    pub ell: usize,
    /// Path length needed for the panchromatic step.
    pub n: usize,
    pub b: usize,
    pub z: usize,
    /// Side of the central region holding the sets.
    pub f10: usize,
    /// Minimum size of every set.
    pub f11: usize,
    /// Margin needed on each side of the central region.
    pub margin: usize,
}

impl SelectionParams {
    pub fn new(r: usize, a: usize) -> Result<Self> {
        if r == 0 || a == 0 {
            return invalid("r and a must be positive");
        }
        if a > 16 {
            return Err(Error::ResourceLimit(format!("a = {a} sets is beyond the supported 16")));
        }
        let ell = min_panchromatic_m(r);
        let n = r * r * a + (a - 1) * ell;
        let b = ell * (a + 1) + 2;
        let z = num_integer::Roots::sqrt(&n);
        let z = if z * z < n { z + 1 } else { z };
        let f11 = (1usize << (a - 1))
            .checked_mul(r * r)
            .and_then(|x| x.checked_mul(b * b))
            .ok_or_else(|| Error::ResourceLimit("set size bound overflows".into()))?;
        // Room for a full U-turn of the strip outside the region.
        let margin = ell + (ell - 1) / 2 - 1;
        Ok(SelectionParams { r, a, ell, n, b, z, f10: b * z, f11, margin })
    }

    pub fn min_height(&self) -> usize {
        self.f10 + 2 * self.margin
    }

    /// Offset of the central region in a host of side `h`.
    pub fn offset(&self, h: usize) -> usize {
        (h - self.f10) / 2
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Selection {
    pub params: SelectionParams,
    /// Host onto the strip `R′`.
    pub witness: ContractionWitness,
    pub strip: PartiallyTriangulatedGrid,
    /// `(r², q, ℓ)`-scattered in the middle path of the strip.
    pub collection: ScatteredCollection,
    /// Heavy strip vertices along the middle path and their traces: bit
    /// `i` is set when the branch set meets `S_i`.
    pub heavy: Vec<usize>,
    pub traces: Vec<u64>,
}

/// Whether every transversal of `collection` meets every set: for each `i`
/// some member lies wholly inside vertices whose trace contains `i`.
pub fn is_full(collection: &ScatteredCollection, trace_of: &BTreeMap<usize, u64>, a: usize) -> bool {
    (0..a).all(|i| {
        collection
            .sets
            .iter()
            .any(|c| c.iter().all(|v| trace_of.get(v).is_some_and(|t| t >> i & 1 == 1)))
    })
}

/// Column (or row) map of the host onto the contracted grid: bar columns
/// stay, each run of non-bar columns inside the region becomes one heavy
/// column. Returns the map, the heavy indices and the count (1-based).
fn axis_map(h: usize, o0: usize, p: &SelectionParams, t: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let role = |c: usize| -> Option<bool> {
        if c <= o0 || c > o0 + p.f10 {
            return None;
        }
        let class = (c - o0 - 1) % p.b + 1;
        Some(!(t..t + p.ell).contains(&class))
    };
    let mut map = vec![0; h + 1];
    let mut heavy = Vec::new();
    let mut idx = 0;
    for c in 1..=h {
        let run = role(c) == Some(true);
        let cont = run && c > 1 && role(c - 1) == Some(true);
        if !cont {
            idx += 1;
            if run {
                heavy.push(idx);
            }
        }
        map[c] = idx;
    }
    (map, heavy, idx)
}

fn argmax_lowest(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Contracts the square host onto an `ℓ`-row strip and picks a scattered
/// collection on its middle path, every transversal of which meets all of
/// `sets`. The sets must lie in the central `f10`-region.
pub fn select_scattered(host: &PartiallyTriangulatedGrid, sets: &[Vec<usize>], r: usize) -> Result<Selection> {
    let a = sets.len();
    let p = SelectionParams::new(r, a)?;
    let sh = host.shape();
    if sh.k != sh.r {
        return invalid("selection needs a square host");
    }
    let h = sh.k;
    if h < p.min_height() {
        return invalid(format!("host side {h} below the minimum {}", p.min_height()));
    }
    let o0 = p.offset(h);
    let in_region = |x: usize| x > o0 && x <= o0 + p.f10;
    let mut sets_clean: Vec<Vec<usize>> = Vec::with_capacity(a);
    for (i, s) in sets.iter().enumerate() {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        for &v in &s {
            if v >= sh.n() {
                return invalid(format!("set {i} has out-of-range vertex {v}"));
            }
            let (x, y) = sh.coords(v);
            if !in_region(x) || !in_region(y) {
                return invalid(format!("set {i} has vertex {v} outside the central region"));
            }
        }
        if s.len() < p.f11 {
            return invalid(format!("set {i} has {} vertices, needs {}", s.len(), p.f11));
        }
        sets_clean.push(s);
    }
    let class = |c: usize| (c - o0 - 1) % p.b;

    // Densest column class and, inside it, densest row class per set.
    let mut xcls = Vec::with_capacity(a);
    let mut ycls = Vec::with_capacity(a);
    for s in &sets_clean {
        let mut cols = vec![0; p.b];
        for &v in s {
            cols[class(sh.coords(v).0)] += 1;
        }
        let xi = argmax_lowest(&cols);
        let mut rows = vec![0; p.b];
        for &v in s {
            let (x, y) = sh.coords(v);
            if class(x) == xi {
                rows[class(y)] += 1;
            }
        }
        xcls.push(xi + 1);
        ycls.push(argmax_lowest(&rows) + 1);
    }
    let window = |avoid: &[usize]| (2..=p.b - p.ell).find(|&t| avoid.iter().all(|&x| x < t || x >= t + p.ell));
    let (Some(tx), Some(ty)) = (window(&xcls), window(&ycls)) else {
        return bug("no free window of bar classes");
    };
    let (colmap, hx, width) = axis_map(h, o0, &p, tx);
    let (rowmap, hy, height) = axis_map(h, o0, &p, ty);
    if hx.len() != p.z + 1 || hy.len() != p.z + 1 || width != height {
        return bug("contracted grid has the wrong shape");
    }
    let mut cols_of = vec![Vec::new(); width + 1];
    for x in 1..=h {
        cols_of[colmap[x]].push(x);
    }
    let mut rows_of = vec![Vec::new(); height + 1];
    for y in 1..=h {
        rows_of[rowmap[y]].push(y);
    }

    // Serpentine strip through the heavy rows.
    let ell = p.ell;
    let hw = (ell - 1) / 2;
    let reach = ell + hw - 1;
    if hx[0] <= reach || hx[p.z] + reach > width {
        return bug("no room for the strip turns");
    }
    let (fl, er) = (hx[0] - reach, hx[p.z] + reach);
    let bands = p.z + 1;
    let row_of = |k: usize, s: usize| if k % 2 == 0 { hy[k] - hw + s - 1 } else { hy[k] + hw + 1 - s };
    let heavy_cols: HashSet<usize> = hx.iter().copied().collect();
    type Column = Vec<Vec<(usize, usize)>>;
    let mut columns: Vec<Column> = Vec::new();
    let mut heavy_at: Vec<usize> = Vec::new();
    for k in 0..bands {
        if k + 1 < bands && hy[k + 1] - hy[k] != ell + 1 {
            return bug("heavy rows are not evenly spaced");
        }
        let rightward = k % 2 == 0;
        let last = k + 1 == bands;
        let lo = if k == 0 || (last && !rightward) { fl } else { fl + ell };
        let hi = if last && rightward { er } else { er - ell };
        let xs: Vec<usize> = if rightward { (lo..=hi).collect() } else { (lo..=hi).rev().collect() };
        for x in xs {
            if heavy_cols.contains(&x) {
                heavy_at.push(columns.len());
            }
            columns.push((1..=ell).map(|s| vec![(x, row_of(k, s))]).collect());
        }
        if last {
            break;
        }
        // L-shaped corner sets, a column across the gap row, and the mirror
        // on the next band; layer s runs nearest the outside for s = 1 on a
        // right turn and for s = ℓ on a left turn.
        let corner = |s: usize| if rightward { er - s + 1 } else { fl + ell - s };
        let inner = if rightward { er - ell + 1 } else { fl + ell - 1 };
        let span = |a: usize, b: usize| if a <= b { a..=b } else { b..=a };
        let gap = hy[k] + hw + 1;
        let mut c1 = Vec::with_capacity(ell);
        let mut c2 = Vec::with_capacity(ell);
        let mut c3 = Vec::with_capacity(ell);
        for s in 1..=ell {
            let x0 = corner(s);
            let (y0, y1) = (row_of(k, s), row_of(k + 1, s));
            let mut first: Vec<(usize, usize)> = span(x0, inner).map(|x| (x, y0)).collect();
            first.extend((y0 + 1..=hy[k] + hw).map(|y| (x0, y)));
            let mut third: Vec<(usize, usize)> = (hy[k + 1] - hw..=y1).map(|y| (x0, y)).collect();
            third.extend(span(x0, inner).filter(|&x| x != x0).map(|x| (x, y1)));
            c1.push(first);
            c2.push(vec![(x0, gap)]);
            c3.push(third);
        }
        columns.extend([c1, c2, c3]);
    }
    let len = columns.len();
    let strip_shape = GridShape::new(len, ell);
    let mut owner = vec![FREE; sh.n()];
    for (tau, col) in columns.iter().enumerate() {
        for (si, cells) in col.iter().enumerate() {
            let rid = strip_shape.id(tau + 1, si + 1);
            for &(cx, cy) in cells {
                for &x in &cols_of[cx] {
                    for &y in &rows_of[cy] {
                        let v = sh.id(x, y);
                        if owner[v] != FREE {
                            return bug(format!("strip cells overlap at host vertex {v}"));
                        }
                        owner[v] = rid;
                    }
                }
            }
        }
    }
    let g = host.graph();
    absorb(&g, &mut owner);
    let witness = quotient(&g, &owner, strip_shape.n())?;
    if let Some(why) = witness.violation(&g, &[]) {
        return bug(format!("strip witness invalid: {why}"));
    }
    let strip = PartiallyTriangulatedGrid::from_graph_trusted(len, ell, &witness.target)
        .or_else(|e| bug(format!("strip is not a grid: {e}")))?;

    let heavy: Vec<usize> = heavy_at.iter().map(|&tau| strip_shape.id(tau + 1, hw + 1)).collect();
    let mut trace_of: BTreeMap<usize, u64> = heavy.iter().map(|&v| (v, 0)).collect();
    for (i, s) in sets_clean.iter().enumerate() {
        for &v in s {
            if let Some(t) = trace_of.get_mut(&owner[v]) {
                *t |= 1 << i;
            }
        }
    }
    let traces: Vec<u64> = heavy.iter().map(|v| trace_of[v]).collect();

    // Largest trace class among heavy vertices meeting S_i, cut to r².
    let r2 = r * r;
    let need = (1usize << (a - 1)) * r2;
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for i in 0..a {
        let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (&v, &t) in heavy.iter().zip(&traces) {
            if t >> i & 1 == 1 {
                classes.entry(t).or_default().push(v);
            }
        }
        let total: usize = classes.values().map(Vec::len).sum();
        if total < need {
            return bug(format!("only {total} heavy vertices meet set {i}, expected {need}"));
        }
        let mut best: Option<&Vec<usize>> = None;
        for members in classes.values() {
            if best.is_none_or(|b| members.len() > b.len()) {
                best = Some(members);
            }
        }
        let ci: Vec<usize> = best.unwrap().iter().take(r2).copied().collect();
        if ci.len() < r2 {
            return bug(format!("trace class for set {i} has fewer than r² vertices"));
        }
        if !chosen.contains(&ci) {
            chosen.push(ci);
        }
    }
    let collection = ScatteredCollection::new(chosen, r2, ell);
    let middle = strip.shape().middle_path();
    if !collection.is_valid_in(&middle) {
        return bug("selected collection is not scattered");
    }
    if !is_full(&collection, &trace_of, a) {
        return bug("selected collection is not full");
    }
    Ok(Selection { params: p, witness, strip, collection, heavy, traces })
}

/// A partially triangulated grid plus apex vertices. In [`ApexGrid::graph`]
/// grid vertices keep their ids and apex `i` gets id `k·r + i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexGrid {
    pub grid: PartiallyTriangulatedGrid,
    /// Grid neighbours of each apex.
    pub apex_neighbors: Vec<Vec<usize>>,
    /// Edges between apices, by apex index.
    pub apex_edges: Vec<(usize, usize)>,
}

impl ApexGrid {
    /// Every apex adjacent to every grid vertex.
    pub fn complete(grid: PartiallyTriangulatedGrid, a: usize) -> Self {
        let n = grid.k * grid.r;
        ApexGrid { grid, apex_neighbors: vec![(0..n).collect(); a], apex_edges: Vec::new() }
    }

    pub fn apex_count(&self) -> usize {
        self.apex_neighbors.len()
    }

    pub fn apices(&self) -> Vec<usize> {
        let n = self.grid.k * self.grid.r;
        (n..n + self.apex_count()).collect()
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut g = self.grid.graph();
        let base = g.n();
        for _ in 0..self.apex_count() {
            g.add_vertex();
        }
        for (i, ns) in self.apex_neighbors.iter().enumerate() {
            for &v in ns {
                if v >= base {
                    return invalid(format!("apex {i} neighbour {v} is not a grid vertex"));
                }
                g.add_edge(base + i, v)?;
            }
        }
        for &(i, j) in &self.apex_edges {
            if i >= self.apex_count() || j >= self.apex_count() || i == j {
                return invalid(format!("apex edge ({i},{j}) is invalid"));
            }
            g.add_edge(base + i, base + j)?;
        }
        Ok(g)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.grid.k * self.grid.r;
        self.apex_neighbors.iter().all(|ns| ns.iter().collect::<HashSet<_>>().len() == n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApexContraction {
    /// Over [`ApexGrid::graph`]; apex branch sets are singletons.
    pub witness: ContractionWitness,
    pub target: ApexGrid,
    /// Apex ids in the source graph.
    pub fixed: Vec<usize>,
}

/// Apex-fixed contraction of `host` onto a complete apex `r`-grid: the
/// selection step followed by the panchromatic step, composed.
pub fn apex_grid_contract(host: &ApexGrid, r: usize) -> Result<ApexContraction> {
    let a = host.apex_count();
    if a == 0 {
        return invalid("no apices");
    }
    let p = SelectionParams::new(r, a)?;
    let sh = host.grid.shape();
    if sh.k != sh.r || sh.k < p.min_height() {
        return invalid(format!("grid part must be square of side at least {}", p.min_height()));
    }
    let o0 = p.offset(sh.k);
    let in_region = |x: usize| x > o0 && x <= o0 + p.f10;
    let mut sets = Vec::with_capacity(a);
    for (i, ns) in host.apex_neighbors.iter().enumerate() {
        let mut s: Vec<usize> = ns
            .iter()
            .copied()
            .filter(|&v| {
                let (x, y) = sh.coords(v);
                v < sh.n() && in_region(x) && in_region(y)
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        if s.len() < p.f11 {
            return invalid(format!("apex {i} has {} central neighbours, needs {}", s.len(), p.f11));
        }
        sets.push(s);
    }
    let sel = select_scattered(&host.grid, &sets, r)?;
    let pan = panchromatic_contract(&sel.strip, &sel.collection, r)?;
    let source = host.graph()?;
    let base = sh.n();
    let mut branch_sets: Vec<Vec<usize>> = pan
        .witness
        .branch_sets
        .iter()
        .map(|us| {
            let mut s: Vec<usize> = us.iter().flat_map(|&u| sel.witness.branch_sets[u].iter().copied()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let mut owner = vec![FREE; source.n()];
    for (t, s) in branch_sets.iter().enumerate() {
        for &v in s {
            owner[v] = t;
        }
    }
    let r2 = r * r;
    let mut apex_neighbors = vec![Vec::new(); a];
    for (i, an) in apex_neighbors.iter_mut().enumerate() {
        let hit: BTreeSet<usize> = source.neighbors(base + i).iter().filter(|&&v| v < base).map(|&v| owner[v]).collect();
        if hit.len() != r2 {
            return bug(format!("apex {i} sees {} of {r2} grid branch sets", hit.len()));
        }
        *an = hit.into_iter().collect();
    }
    let target = ApexGrid { grid: pan.grid.clone(), apex_neighbors, apex_edges: host.apex_edges.clone() };
    branch_sets.extend((0..a).map(|i| vec![base + i]));
    let witness = ContractionWitness { target: target.graph()?, branch_sets };
    let fixed = host.apices();
    if let Some(why) = witness.violation(&source, &fixed) {
        return bug(format!("composed witness invalid: {why}"));
    }
    if !witness.is_spanning(&source) {
        return bug("composed witness does not cover the host");
    }
    Ok(ApexContraction { witness, target, fixed })
}

/// Whether every F-hitting set of size at most `k` meets `apices`, decided
/// by trying every candidate set that avoids them.
pub fn forcing_check(g: &Graph, apices: &[usize], family: &[Graph], k: usize, budget: &Budget) -> Result<bool> {
    if apices.is_empty() {
        return invalid("apex set must be nonempty");
    }
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    if let Some(&v) = apices.iter().find(|&&v| v >= g.n()) {
        return invalid(format!("apex {v} out of range"));
    }
    let a: HashSet<usize> = apices.iter().copied().collect();
    let rest: Vec<usize> = (0..g.n()).filter(|v| !a.contains(v)).collect();
    for pick in subsets_up_to(rest.len(), k) {
        budget.tick()?;
        let del: Vec<usize> = pick.iter().map(|&i| rest[i]).collect();
        let (h, _) = g.delete_vertices(&del);
        if family_model(family, &h, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How colours are assigned to the scattered positions of a fixture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorLayout {
    /// Colour `i` takes the `i`-th block of consecutive positions.
    Blocks,
    /// Position `t` gets colour `t mod a`.
    Interleaved,
    Shuffled,
}

/// A host of minimal legal size plus `slack` extra columns, with random
/// diagonals and an `(r², a, d)`-scattered colouring of its middle path.
pub fn panchromatic_fixture<R: Rng>(
    r: usize,
    a: usize,
    d: usize,
    slack: usize,
    layout: ColorLayout,
    chord_p: f64,
    rng: &mut R,
) -> Result<(PartiallyTriangulatedGrid, ScatteredCollection)> {
    if r == 0 || a == 0 {
        return invalid("r and a must be positive");
    }
    let (n, m) = (min_panchromatic_n(r, a, d) + slack, min_panchromatic_m(r));
    let host = PartiallyTriangulatedGrid::random_diagonals(n, m, chord_p, rng);
    let sh = host.shape();
    let count = a * r * r;
    let spare = n - ((count - 1) * (d + 1) + 1);
    let mut shifts: Vec<usize> = (0..count).map(|_| rng.gen_range(0..=spare)).collect();
    shifts.sort_unstable();
    let cols: Vec<usize> = (0..count).map(|t| 1 + t * (d + 1) + shifts[t]).collect();
    let mut colour: Vec<usize> = match layout {
        ColorLayout::Blocks => (0..count).map(|t| t / (r * r)).collect(),
        ColorLayout::Interleaved => (0..count).map(|t| t % a).collect(),
        ColorLayout::Shuffled => (0..count).map(|t| t % a).collect(),
    };
    if layout == ColorLayout::Shuffled {
        colour.shuffle(rng);
    }
    let mut sets = vec![Vec::new(); a];
    for (t, &x) in cols.iter().enumerate() {
        sets[colour[t]].push(sh.id(x, sh.middle_row()));
    }
    Ok((host, ScatteredCollection::new(sets, r * r, d)))
}

/// A minimal-size apex grid whose apices each see `max(f11, density·|region|)`
/// random vertices of the central region.
pub fn apex_fixture<R: Rng>(r: usize, a: usize, density: f64, chord_p: f64, rng: &mut R) -> Result<ApexGrid> {
    let p = SelectionParams::new(r, a)?;
    let h = p.min_height();
    let grid = PartiallyTriangulatedGrid::random_diagonals(h, h, chord_p, rng);
    let sh = grid.shape();
    let o0 = p.offset(h);
    let region: Vec<usize> = (o0 + 1..=o0 + p.f10)
        .flat_map(|y| (o0 + 1..=o0 + p.f10).map(move |x| (x, y)))
        .map(|(x, y)| sh.id(x, y))
        .collect();
    let want = ((density * region.len() as f64) as usize).clamp(p.f11, region.len());
    let apex_neighbors = (0..a)
        .map(|_| {
            let mut s: Vec<usize> = rand::seq::index::sample(rng, region.len(), want).into_iter().map(|i| region[i]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    Ok(ApexGrid { grid, apex_neighbors, apex_edges: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::complete;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_pan(r: usize, a: usize, layout: ColorLayout, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (host, c) = panchromatic_fixture(r, a, 2 * r * r, 0, layout, 0.3, &mut rng).unwrap();
        let out = panchromatic_contract(&host, &c, r).unwrap();
        let g = host.graph();
        assert!(verify_witness(&g, &out.witness, &[]));
        assert!(out.witness.is_spanning(&g));
        assert_eq!(out.grid.k, r);
    }

    #[test]
    fn panchromatic_small() {
        check_pan(2, 1, ColorLayout::Blocks, 1);
        check_pan(2, 3, ColorLayout::Interleaved, 2);
        check_pan(3, 2, ColorLayout::Shuffled, 3);
        check_pan(1, 2, ColorLayout::Shuffled, 4);
    }

    #[test]
    fn panchromatic_rejects_narrow_hosts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (host, c) = panchromatic_fixture(2, 2, 8, 0, ColorLayout::Blocks, 0.0, &mut rng).unwrap();
        let narrow = PartiallyTriangulatedGrid::plain(host.k - 1, host.r);
        assert!(matches!(panchromatic_contract(&narrow, &c, 2), Err(Error::InvalidArgument(_))));
        let low = PartiallyTriangulatedGrid::plain(host.k, host.r - 1);
        assert!(panchromatic_contract(&low, &c, 2).is_err());
        assert!(panchromatic_contract(&host, &ScatteredCollection { d: 7, ..c.clone() }, 2).is_err());
    }

    #[test]
    fn selection_single_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ag = apex_fixture(1, 1, 0.0, 0.2, &mut rng).unwrap();
        let sel = select_scattered(&ag.grid, &ag.apex_neighbors, 1).unwrap();
        assert_eq!(sel.collection.h, 1);
        assert!(verify_witness(&ag.grid.graph(), &sel.witness, &[]));
    }

    #[test]
    fn identical_traces_collapse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut ag = apex_fixture(1, 2, 0.0, 0.1, &mut rng).unwrap();
        ag.apex_neighbors[1] = ag.apex_neighbors[0].clone();
        let sel = select_scattered(&ag.grid, &ag.apex_neighbors, 1).unwrap();
        assert_eq!(sel.collection.h, 1);
    }

    #[test]
    fn undersized_sets_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut ag = apex_fixture(1, 1, 0.0, 0.1, &mut rng).unwrap();
        ag.apex_neighbors[0].truncate(3);
        assert!(matches!(select_scattered(&ag.grid, &ag.apex_neighbors, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(apex_grid_contract(&ag, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn apex_grid_single_apex() {
        let p = SelectionParams::new(2, 1).unwrap();
        let h = p.min_height();
        let ag = ApexGrid::complete(PartiallyTriangulatedGrid::plain(h, h), 1);
        let out = apex_grid_contract(&ag, 2).unwrap();
        assert!(out.target.is_complete());
        assert!(verify_witness(&ag.graph().unwrap(), &out.witness, &out.fixed));
    }

    #[test]
    fn forcing_on_tiny_fixture() {
        let ag = ApexGrid::complete(PartiallyTriangulatedGrid::plain(3, 3), 1);
        let g = ag.graph().unwrap();
        let b = Budget::default();
        assert!(forcing_check(&g, &ag.apices(), &[complete(3)], 1, &b).unwrap());
        assert!(forcing_check(&g, &[], &[complete(3)], 1, &b).is_err());
    }
}
