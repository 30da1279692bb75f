//! graph6 and adjacency JSON.

use super::Graph;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn perr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let b = s.as_bytes();
    if let Some(&bad) = b.iter().find(|&&c| !(63..=126).contains(&c)) {
        return perr(format!("byte {bad} outside graph6 range 63..=126"));
    }
    if b.is_empty() {
        return perr("empty graph6 string");
    }
    let (n, mut pos) = if b[0] != 126 {
        ((b[0] - 63) as usize, 1)
    } else if b.len() >= 2 && b[1] != 126 {
        if b.len() < 4 {
            return perr("truncated graph6 size field");
        }
        (b[1..4].iter().fold(0usize, |a, &c| a << 6 | (c - 63) as usize), 4)
    } else {
        if b.len() < 8 {
            return perr("truncated graph6 size field");
        }
        (b[2..8].iter().fold(0usize, |a, &c| a << 6 | (c - 63) as usize), 8)
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if b.len() - pos != need {
        return perr(format!("graph6 body has {} bytes, expected {need}", b.len() - pos));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if k % 6 == 0 {
                cur = b[pos] - 63;
                pos += 1;
            }
            if cur >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j).expect("in range");
            }
            k += 1;
        }
    }
    if k % 6 != 0 && cur & ((1 << (6 - k % 6)) - 1) != 0 {
        return perr("nonzero graph6 padding bits");
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson { n: g.n(), edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<&GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: &GraphJson) -> Result<Graph> {
        let mut g = Graph::new(j.n);
        for &[u, v] in &j.edges {
            g.add_edge(u, v).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(g)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(&j).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("serialisable")
}

pub fn from_json(s: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Graph::try_from(&j)
}

/// Accepts either format: JSON if the text starts with `{`, graph6 otherwise.
pub fn parse_graph(s: &str) -> Result<Graph> {
    let t = s.trim();
    if t.starts_with('{') {
        from_json(t)
    } else {
        from_graph6(t)
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn k2_is_a_underscore() {
        assert_eq!(to_graph6(&complete(2)), "A_");
        assert_eq!(from_graph6("A_").unwrap(), complete(2));
    }

    #[test]
    fn known_vector() {
        // a-c, a-e, b-d, d-e on five vertices.
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(from_graph6("DQc").unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(from_graph6("A\x10"), Err(Error::Parse(_))));
        assert!(matches!(from_graph6("Bw?"), Err(Error::Parse(_))));
        assert!(matches!(from_graph6(""), Err(Error::Parse(_))));
        assert!(matches!(from_graph6("A`"), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trips() {
        for g in [Graph::new(0), Graph::new(1), petersen(), grid(9, 9), complete(7)] {
            let s = to_graph6(&g);
            assert_eq!(from_graph6(&s).unwrap(), g);
            assert_eq!(from_json(&to_json(&g)).unwrap(), g);
        }
        assert_eq!(to_graph6(&petersen()), to_graph6(&from_graph6(&to_graph6(&petersen())).unwrap()));
    }

    #[test]
    fn json_errors_are_parse_errors() {
        assert!(matches!(from_json(r#"{"n":2,"edges":[[0,2]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("{"), Err(Error::Parse(_))));
    }
}
