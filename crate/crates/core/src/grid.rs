//! Grids and partially triangulated grids in first-coordinate-horizontal
//! coordinates. Vertex `(x, y)`, 1-indexed with `x` in `1..=k` (columns) and
//! `y` in `1..=r` (rows), has id `(y-1)·k + (x-1)`.

use crate::error::{invalid, Result};
use crate::graph::{is_planar, Graph};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub k: usize,
    pub r: usize,
}

impl GridShape {
    pub fn new(k: usize, r: usize) -> GridShape {
        GridShape { k, r }
    }

    pub fn n(&self) -> usize {
        self.k * self.r
    }

    pub fn id(&self, x: usize, y: usize) -> usize {
        debug_assert!((1..=self.k).contains(&x) && (1..=self.r).contains(&y));
        (y - 1) * self.k + (x - 1)
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.k + 1, v / self.k + 1)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 1 && y >= 1 && x <= self.k as i64 && y <= self.r as i64
    }

    /// Row of the middle horizontal path.
    pub fn middle_row(&self) -> usize {
        self.r.div_ceil(2)
    }

    pub fn graph(&self) -> Graph {
        build_grid(self.k, self.r)
    }

    /// `i`-th vertical path, bottom to top.
    pub fn vertical_path(&self, i: usize) -> Result<Vec<usize>> {
        if i == 0 || i > self.k {
            return invalid(format!("column {i} outside 1..={}", self.k));
        }
        Ok((1..=self.r).map(|y| self.id(i, y)).collect())
    }

    /// `j`-th horizontal path, left to right.
    pub fn horizontal_path(&self, j: usize) -> Result<Vec<usize>> {
        if j == 0 || j > self.r {
            return invalid(format!("row {j} outside 1..={}", self.r));
        }
        Ok((1..=self.k).map(|x| self.id(x, j)).collect())
    }

    pub fn middle_path(&self) -> Vec<usize> {
        self.horizontal_path(self.middle_row()).unwrap()
    }

    fn offset_row(&self, j: i64) -> Result<usize> {
        let y = self.middle_row() as i64 + j;
        if y < 1 || y > self.r as i64 {
            return invalid(format!("row offset {j} leaves the grid"));
        }
        Ok(y as usize)
    }

    /// `P_{i, j→j'}`: column `i` between row offsets `j` and `j'` from the
    /// middle row, in the given direction.
    pub fn vertical_segment(&self, i: usize, j: i64, j2: i64) -> Result<Vec<usize>> {
        if i == 0 || i > self.k {
            return invalid(format!("column {i} outside 1..={}", self.k));
        }
        let (a, b) = (self.offset_row(j)?, self.offset_row(j2)?);
        Ok(span(a, b).into_iter().map(|y| self.id(i, y)).collect())
    }

    /// `P_{i→i', j}`: row offset `j` between columns `i` and `i'`.
    pub fn horizontal_segment(&self, i: usize, i2: usize, j: i64) -> Result<Vec<usize>> {
        for c in [i, i2] {
            if c == 0 || c > self.k {
                return invalid(format!("column {c} outside 1..={}", self.k));
            }
        }
        let y = self.offset_row(j)?;
        Ok(span(i, i2).into_iter().map(|x| self.id(x, y)).collect())
    }

    /// Vertices of the central `q`-grid of a square grid.
    pub fn central_grid(&self, q: usize) -> Result<Vec<usize>> {
        if self.k != self.r {
            return invalid("central grids are defined for square grids");
        }
        if q > self.k || (self.k - q) % 2 != 0 {
            return invalid(format!("no central {q}-grid in a {}-grid", self.k));
        }
        let o = (self.k - q) / 2;
        let mut out = Vec::new();
        for y in o + 1..=o + q {
            for x in o + 1..=o + q {
                out.push(self.id(x, y));
            }
        }
        Ok(out)
    }

    /// Layers of a square grid as closed cycles, outermost first.
    pub fn layers(&self) -> Result<Vec<Vec<usize>>> {
        if self.k != self.r {
            return invalid("layers are defined for square grids");
        }
        let n = self.k;
        let mut out = Vec::new();
        for i in 1..=n.div_ceil(2) {
            let (lo, hi) = (i, n + 1 - i);
            if hi <= lo {
                break;
            }
            let mut cyc = Vec::new();
            for x in lo..hi {
                cyc.push(self.id(x, lo));
            }
            for y in lo..hi {
                cyc.push(self.id(hi, y));
            }
            for x in (lo + 1..=hi).rev() {
                cyc.push(self.id(x, hi));
            }
            for y in (lo + 1..=hi).rev() {
                cyc.push(self.id(lo, y));
            }
            out.push(cyc);
        }
        Ok(out)
    }
}

fn span(a: usize, b: usize) -> Vec<usize> {
    if a <= b {
        (a..=b).collect()
    } else {
        (b..=a).rev().collect()
    }
}

pub fn build_grid(k: usize, r: usize) -> Graph {
    crate::graph::named::grid(k, r)
}

/// A `k × r` grid plus chords keeping it planar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiallyTriangulatedGrid {
    pub k: usize,
    pub r: usize,
    pub chords: Vec<(usize, usize)>,
}

impl PartiallyTriangulatedGrid {
    /// Checks ranges, simplicity and planarity of the chords.
    pub fn new(k: usize, r: usize, chords: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self::assemble(k, r, &chords)?;
        if !is_planar(&g) {
            return invalid("chords make the grid non-planar");
        }
        Ok(Self::normalised(k, r, chords))
    }

    /// For chord sets planar by construction, such as contractions of a
    /// planar graph, where a planarity test at this size is not wanted.
    pub(crate) fn new_trusted(k: usize, r: usize, chords: Vec<(usize, usize)>) -> Self {
        Self::normalised(k, r, chords)
    }

    fn normalised(k: usize, r: usize, chords: Vec<(usize, usize)>) -> Self {
        let mut chords: Vec<_> = chords.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        chords.sort_unstable();
        chords.dedup();
        PartiallyTriangulatedGrid { k, r, chords }
    }

    fn assemble(k: usize, r: usize, chords: &[(usize, usize)]) -> Result<Graph> {
        let mut g = build_grid(k, r);
        for &(a, b) in chords {
            if a >= g.n() || b >= g.n() || a == b {
                return invalid(format!("chord ({a},{b}) is not a pair of distinct grid vertices"));
            }
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn plain(k: usize, r: usize) -> Self {
        PartiallyTriangulatedGrid { k, r, chords: Vec::new() }
    }

    /// One diagonal, in a random direction, in each unit square with
    /// probability `p`. Planar by construction.
    pub fn random_diagonals<R: Rng>(k: usize, r: usize, p: f64, rng: &mut R) -> Self {
        let s = GridShape::new(k, r);
        let mut chords = Vec::new();
        for y in 1..r {
            for x in 1..k {
                if rng.gen_bool(p) {
                    if rng.gen_bool(0.5) {
                        chords.push((s.id(x, y), s.id(x + 1, y + 1)));
                    } else {
                        chords.push((s.id(x + 1, y), s.id(x, y + 1)));
                    }
                }
            }
        }
        Self::normalised(k, r, chords)
    }

    pub fn shape(&self) -> GridShape {
        GridShape::new(self.k, self.r)
    }

    pub fn graph(&self) -> Graph {
        Self::assemble(self.k, self.r, &self.chords).expect("validated chords")
    }

    /// Reads a graph whose first `k·r` ids are laid out as a grid; every
    /// other edge becomes a chord. Errors if a grid edge is missing.
    pub fn from_graph_trusted(k: usize, r: usize, g: &Graph) -> Result<Self> {
        if g.n() != k * r {
            return invalid(format!("graph has {} vertices, grid needs {}", g.n(), k * r));
        }
        let grid = build_grid(k, r);
        if let Some((a, b)) = grid.edges().into_iter().find(|&(a, b)| !g.has_edge(a, b)) {
            return invalid(format!("grid edge ({a},{b}) missing"));
        }
        let chords = g.edges().into_iter().filter(|&(a, b)| !grid.has_edge(a, b)).collect();
        Ok(Self::new_trusted(k, r, chords))
    }
}

/// Whether `sets` is `(r,h,d)`-scattered in the path `path`: exactly `h`
/// sets of `r` path vertices each, pairwise disjoint, and every two vertices
/// of their union more than `d` apart along the path.
pub fn is_scattered(sets: &[Vec<usize>], path: &[usize], r: usize, h: usize, d: usize) -> bool {
    if sets.len() != h {
        return false;
    }
    let pos: HashMap<usize, usize> = path.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut all = Vec::new();
    for s in sets {
        if s.len() != r {
            return false;
        }
        for v in s {
            match pos.get(v) {
                Some(&p) => all.push(p),
                None => return false,
            }
        }
    }
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    all.windows(2).all(|w| w[1] - w[0] > d)
}
