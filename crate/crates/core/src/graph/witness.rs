use super::Graph;
use serde::{Deserialize, Serialize};

/// A minor model: `branch_sets[t]` is the source vertex set of target vertex `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionWitness {
    pub target: Graph,
    pub branch_sets: Vec<Vec<usize>>,
}

impl ContractionWitness {
    pub fn identity(g: &Graph) -> Self {
        ContractionWitness { target: g.clone(), branch_sets: (0..g.n()).map(|v| vec![v]).collect() }
    }

    /// First violated model condition, if any. Vertices in `fixed` that are
    /// used must form singleton branch sets.
    pub fn violation(&self, source: &Graph, fixed: &[usize]) -> Option<String> {
        if self.branch_sets.len() != self.target.n() {
            return Some(format!(
                "{} branch sets for {} target vertices",
                self.branch_sets.len(),
                self.target.n()
            ));
        }
        let mut owner = vec![usize::MAX; source.n()];
        for (t, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return Some(format!("branch set {t} is empty"));
            }
            for &v in set {
                if v >= source.n() {
                    return Some(format!("branch set {t} has out-of-range vertex {v}"));
                }
                if owner[v] != usize::MAX {
                    return Some(format!("vertex {v} in branch sets {} and {t}", owner[v]));
                }
                owner[v] = t;
            }
        }
        // Sets are disjoint, so one shared visited array keeps this linear.
        let mut seen = vec![false; source.n()];
        for (t, set) in self.branch_sets.iter().enumerate() {
            let mut stack = vec![set[0]];
            seen[set[0]] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for &u in source.neighbors(v) {
                    if owner[u] == t && !seen[u] {
                        seen[u] = true;
                        count += 1;
                        stack.push(u);
                    }
                }
            }
            if count != set.len() {
                return Some(format!("branch set {t} is disconnected"));
            }
        }
        for &f in fixed {
            if f < source.n() && owner[f] != usize::MAX && self.branch_sets[owner[f]].len() != 1 {
                return Some(format!("fixed vertex {f} is not a singleton branch set"));
            }
        }
        for (a, b) in self.target.edges() {
            let realised = self.branch_sets[a]
                .iter()
                .any(|&u| source.neighbors(u).iter().any(|&w| owner[w] == b));
            if !realised {
                return Some(format!("target edge ({a},{b}) has no source edge"));
            }
        }
        None
    }

    pub fn is_valid(&self, source: &Graph) -> bool {
        self.violation(source, &[]).is_none()
    }

    /// Whether branch sets cover the whole source (a contraction, not just a minor).
    pub fn is_spanning(&self, source: &Graph) -> bool {
        self.branch_sets.iter().map(Vec::len).sum::<usize>() == source.n()
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn identity_is_valid() {
        let g = petersen();
        assert!(ContractionWitness::identity(&g).is_valid(&g));
    }

    #[test]
    fn disconnected_branch_set_rejected() {
        let g = path(3);
        let w = ContractionWitness { target: Graph::new(1), branch_sets: vec![vec![0, 2]] };
        assert!(!w.is_valid(&g));
    }

    #[test]
    fn fixed_vertex_must_be_singleton() {
        let g = path(3);
        let w = ContractionWitness { target: complete(2), branch_sets: vec![vec![0, 1], vec![2]] };
        assert!(w.is_valid(&g));
        assert!(w.violation(&g, &[0]).is_some());
        assert!(w.violation(&g, &[2]).is_none());
    }
}
