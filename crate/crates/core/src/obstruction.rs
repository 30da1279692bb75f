//! Graph enumeration by canonical augmentation and obstruction sets of
//! `A_k(excl(F))`.

use crate::error::{invalid, Budget, Error, Result};
use crate::graph::{canonical_code, canonical_form, to_graph6, CanonicalCode, Graph};
use crate::minor::{is_in_ak_budget, min_hitting_size};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

/// Default vertex cap for [`enumerate_graphs`].
pub const ENUM_BUDGET: usize = 10;

/// One representative per isomorphism class on `n` vertices.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    enumerate_graphs_capped(n, ENUM_BUDGET)
}

pub fn enumerate_graphs_capped(n: usize, cap: usize) -> Result<Vec<Graph>> {
    if n > cap {
        return Err(Error::ResourceLimit(format!("graph enumeration capped at {cap} vertices")));
    }
    let mut level = vec![Graph::new(0)];
    for _ in 0..n {
        level = augment(&level);
    }
    Ok(level)
}

/// All levels `0..=n`.
pub fn enumerate_levels(n: usize, cap: usize) -> Result<Vec<Vec<Graph>>> {
    if n > cap {
        return Err(Error::ResourceLimit(format!("graph enumeration capped at {cap} vertices")));
    }
    let mut out = vec![vec![Graph::new(0)]];
    for i in 0..n {
        let next = augment(&out[i]);
        out.push(next);
    }
    Ok(out)
}

/// Children on one more vertex. A child is kept only if its new vertex lies
/// in the automorphism orbit of the vertex labelled last canonically, so it
/// is reached from exactly one parent; duplicates under one parent are
/// removed by code.
fn augment(parents: &[Graph]) -> Vec<Graph> {
    parents
        .par_iter()
        .map(|p| {
            let n = p.n();
            let mut seen: HashSet<CanonicalCode> = HashSet::new();
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << n) {
                let mut c = p.clone();
                let v = c.add_vertex();
                for u in 0..n {
                    if mask >> u & 1 == 1 {
                        c.add_edge(u, v).unwrap();
                    }
                }
                let f = canonical_form(&c);
                let last = f.labeling.iter().position(|&l| l == n).unwrap();
                if f.orbit[last] != f.orbit[v] {
                    continue;
                }
                if seen.insert(f.code.clone()) {
                    out.push(c);
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// Every graph obtained by one vertex deletion, edge deletion or edge contraction.
pub fn one_step_minors(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        out.push(g.delete_vertex(v).unwrap());
    }
    for (u, v) in g.edges() {
        out.push(g.delete_edge(u, v).unwrap());
        out.push(g.contract_edge(u, v).unwrap());
    }
    out
}

/// `g ∉ A_k(excl(F))` while every one-step minor is in it.
pub fn is_obstruction(g: &Graph, family: &[Graph], k: usize) -> Result<bool> {
    let b = Budget::default();
    if is_in_ak_budget(g, family, k, &b)? {
        return Ok(false);
    }
    for h in one_step_minors(g) {
        if !is_in_ak_budget(&h, family, k, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimum F-hitting set of `g` has size exactly `k+1`.
pub fn verify_hitting_size(g: &Graph, family: &[Graph], k: usize) -> Result<bool> {
    Ok(min_hitting_size(g, family)? == k + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    In,
    Out,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionRun {
    pub family: Vec<String>,
    pub k: usize,
    pub n_max: usize,
    /// Obstructions in canonical labelling, sorted by canonical code.
    #[serde(skip)]
    pub found: Vec<Graph>,
    #[serde(skip)]
    pub codes: Vec<CanonicalCode>,
    /// Obstruction count for each vertex count `0..=n_max`.
    pub per_n_counts: Vec<usize>,
    /// Graphs examined for each vertex count.
    pub graphs_per_n: Vec<usize>,
    /// Candidates whose membership test ran out of budget.
    pub unknown_candidates: usize,
    /// True when every candidate up to `n_max` was decided. Never a claim
    /// about obstructions larger than `n_max`.
    pub complete_up_to_n_max: bool,
    pub wall_clock_ms: u128,
}

impl ObstructionRun {
    pub fn to_ndjson(&self) -> String {
        self.found.iter().map(|g| to_graph6(g) + "\n").collect()
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }
}

/// Per-candidate node budget used by [`enumerate_obstructions`].
pub const CANDIDATE_BUDGET: u64 = 5_000_000;

pub fn enumerate_obstructions(family: &[Graph], k: usize, n_max: usize) -> Result<ObstructionRun> {
    enumerate_obstructions_with(family, k, n_max, ENUM_BUDGET, CANDIDATE_BUDGET)
}

/// Processes graphs by vertex count, then edge count, so that every
/// one-step minor is decided before the graph itself. A graph with a minor
/// outside the class is outside and not minimal, and is never tested; this
/// is the blocklist pruning.
pub fn enumerate_obstructions_with(
    family: &[Graph],
    k: usize,
    n_max: usize,
    cap: usize,
    candidate_budget: u64,
) -> Result<ObstructionRun> {
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    if family.iter().any(|h| h.n() == 0) {
        return invalid("family members must have at least one vertex");
    }
    let start = std::time::Instant::now();
    let levels = enumerate_levels(n_max, cap)?;
    let mut status: HashMap<CanonicalCode, Status> = HashMap::new();
    status.insert(canonical_code(&Graph::new(0)), Status::In);
    let mut found: Vec<(CanonicalCode, Graph)> = Vec::new();
    let mut unknown = 0;
    let mut per_n = vec![0; n_max + 1];
    let mut graphs_per_n = vec![0; n_max + 1];
    for (n, level) in levels.iter().enumerate().skip(1) {
        graphs_per_n[n] = level.len();
        let max_m = level.iter().map(Graph::m).max().unwrap_or(0);
        for m in 0..=max_m {
            let group: Vec<&Graph> = level.iter().filter(|g| g.m() == m).collect();
            let decided: Vec<(CanonicalCode, Status, bool, Graph)> = group
                .par_iter()
                .map(|g| {
                    let code = canonical_code(g);
                    let minors: Vec<Status> = one_step_minors(g)
                        .iter()
                        .map(|h| *status.get(&canonical_code(h)).expect("minor already decided"))
                        .collect();
                    if minors.contains(&Status::Out) {
                        return (code, Status::Out, false, (*g).clone());
                    }
                    let b = Budget::new(candidate_budget);
                    match is_in_ak_budget(g, family, k, &b) {
                        Ok(true) => (code, Status::In, false, (*g).clone()),
                        Ok(false) if minors.contains(&Status::Unknown) => (code, Status::Out, false, (*g).clone()),
                        Ok(false) => (code, Status::Out, true, (*g).clone()),
                        Err(_) => (code, Status::Unknown, false, (*g).clone()),
                    }
                })
                .collect();
            for (code, st, obstruction, g) in decided {
                if st == Status::Unknown {
                    unknown += 1;
                }
                if obstruction {
                    per_n[n] += 1;
                    let canon = canonical_form(&g).apply(&g);
                    found.push((code.clone(), canon));
                }
                status.insert(code, st);
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ObstructionRun {
        family: family.iter().map(to_graph6).collect(),
        k,
        n_max,
        codes: found.iter().map(|x| x.0.clone()).collect(),
        found: found.into_iter().map(|x| x.1).collect(),
        per_n_counts: per_n,
        graphs_per_n,
        unknown_candidates: unknown,
        complete_up_to_n_max: unknown == 0,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}
