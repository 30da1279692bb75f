//! Named graph families.

use super::Graph;
use crate::error::{invalid, Error, Result};

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// `K_{a,b}`: sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v).unwrap();
    }
    g
}

/// Cycle on `n >= 3` vertices (smaller `n` gives a path).
pub fn cycle(n: usize) -> Graph {
    let mut g = path(n);
    if n >= 3 {
        g.add_edge(n - 1, 0).unwrap();
    }
    g
}

pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn petersen() -> Graph {
    let mut g = Graph::new(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5).unwrap();
        g.add_edge(i, i + 5).unwrap();
        g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
    }
    g
}

/// `k × r` grid: vertex `(x,y)` with `x < k`, `y < r` has id `y*k + x`.
pub fn grid(k: usize, r: usize) -> Graph {
    let mut g = Graph::new(k * r);
    for y in 0..r {
        for x in 0..k {
            let v = y * k + x;
            if x + 1 < k {
                g.add_edge(v, v + 1).unwrap();
            }
            if y + 1 < r {
                g.add_edge(v, v + k).unwrap();
            }
        }
    }
    g
}

/// Parses names such as `K5`, `K3,3`, `P4`, `C6`, `petersen`, `grid:3x4`,
/// `empty5` and `2K2` (disjoint copies).
pub fn by_name(name: &str) -> Result<Graph> {
    let s = name.trim();
    let bad = || Error::InvalidArgument(format!("unknown graph name '{name}'"));
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    if s.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    if let Some(rest) = s.strip_prefix("grid:") {
        let parts: Vec<&str> = rest.split(['x', '×', 'X']).collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        return Ok(grid(num(parts[0])?, num(parts[1])?));
    }
    if let Some(rest) = s.strip_prefix("empty") {
        return Ok(Graph::new(num(rest)?));
    }
    let lead = s.chars().take_while(|c| c.is_ascii_digit()).count();
    if lead > 0 && lead < s.len() {
        let copies = num(&s[..lead])?;
        let one = by_name(&s[lead..])?;
        let mut g = Graph::new(0);
        for _ in 0..copies {
            g = g.disjoint_union(&one);
        }
        return Ok(g);
    }
    let (head, tail) = s.split_at(1.min(s.len()));
    match head {
        "K" => {
            if let Some((a, b)) = tail.split_once(',') {
                Ok(complete_bipartite(num(a)?, num(b)?))
            } else {
                Ok(complete(num(tail)?))
            }
        }
        "P" => Ok(path(num(tail)?)),
        "C" => {
            let n = num(tail)?;
            if n < 3 {
                return invalid("cycles need at least 3 vertices");
            }
            Ok(cycle(n))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(by_name("K5").unwrap().m(), 10);
        assert_eq!(by_name("K3,3").unwrap().m(), 9);
        assert_eq!(by_name("2K2").unwrap().edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(by_name("grid:3x4").unwrap().n(), 12);
        assert_eq!(by_name("petersen").unwrap().m(), 15);
        assert!(by_name("Q7").is_err());
        assert!(by_name("C2").is_err());
    }

    #[test]
    fn petersen_is_cubic() {
        let g = petersen();
        assert!((0..10).all(|v| g.degree(v) == 3));
    }
}
