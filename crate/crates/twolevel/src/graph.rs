//! Simple undirected graphs: stable-set and clique counting, perfectness at
//! small scale, and exhaustive enumeration of labeled graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple loopless graph on nodes `0..n`, stored as an adjacency bitmask
/// per node. Desk scale: `n <= 20`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphWire {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire { n: self.n, edges: self.edges() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = GraphWire::deserialize(d)?;
        Graph::new(wire.n, &wire.edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 20 {
            return Err(Error::ScaleExceeded { what: format!("graph on {n} nodes") });
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::BadInput(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::BadInput(format!("loop at node {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, &[]).expect("empty graph")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        Graph::new(n, &edges).expect("complete graph")
    }

    /// Decodes one of the `2^{n(n-2)/2}` labeled graphs: bit `k` of `code`
    /// is the edge with index `k` in lexicographic pair order.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if (code >> k) & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges).expect("decoded graph")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn complement(&self) -> Self {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let adj = (0..self.n).map(|u| full & !self.adj[u] & !(1 << u)).collect();
        Graph { n: self.n, adj }
    }

    pub fn is_stable_set(&self, mask: u32) -> bool {
        for u in 0..self.n {
            if mask >> u & 1 == 1 && self.adj[u] & mask != 0 {
                return false;
            }
        }
        true
    }

    pub fn is_clique(&self, mask: u32) -> bool {
        for u in 0..self.n {
            if mask >> u & 1 == 1 {
                let rest = mask & !(1 << u);
                if self.adj[u] & rest != rest {
                    return false;
                }
            }
        }
        true
    }

    /// Number of stable sets, the empty set included.
    pub fn count_stable_sets(&self) -> u64 {
        self.count_stable_rec(0, 0)
    }

    fn count_stable_rec(&self, node: usize, used: u32) -> u64 {
        if node == self.n {
            return 1;
        }
        let mut total = self.count_stable_rec(node + 1, used);
        if used & self.adj[node] == 0 {
            total += self.count_stable_rec(node + 1, used | (1 << node));
        }
        total
    }

    /// Number of cliques, the empty set included.
    pub fn count_cliques(&self) -> u64 {
        self.complement().count_stable_sets()
    }

    /// All stable sets as bitmasks, in increasing mask order.
    pub fn stable_sets(&self) -> Vec<u32> {
        (0u32..(1u32 << self.n)).filter(|&m| self.is_stable_set(m)).collect()
    }

    /// Perfectness at small scale: no induced odd hole and no induced odd
    /// antihole of length at least five, in the graph or its complement.
    pub fn is_perfect(&self) -> bool {
        !self.has_odd_hole() && !self.complement().has_odd_hole()
    }

    fn has_odd_hole(&self) -> bool {
        for size in (5..=self.n).step_by(2) {
            for mask in 0u32..(1u32 << self.n) {
                if (mask.count_ones() as usize) == size && self.induced_is_cycle(mask) {
                    return true;
                }
            }
        }
        false
    }

    fn induced_is_cycle(&self, mask: u32) -> bool {
        let nodes: Vec<usize> = (0..self.n).filter(|&u| mask >> u & 1 == 1).collect();
        // every node has exactly two neighbors inside, and the subgraph is connected
        for &u in &nodes {
            if (self.adj[u] & mask).count_ones() != 2 {
                return false;
            }
        }
        let mut seen = 1u32 << nodes[0];
        let mut frontier = vec![nodes[0]];
        while let Some(u) = frontier.pop() {
            let mut nb = self.adj[u] & mask & !seen;
            while nb != 0 {
                let v = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << v;
                frontier.push(v);
            }
        }
        seen == mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_counts() {
        // a - b - c
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.count_stable_sets(), 5);
        assert_eq!(g.count_cliques(), 6);
    }

    #[test]
    fn empty_and_complete_counts() {
        for n in 1..=6 {
            let e = Graph::empty(n);
            assert_eq!(e.count_stable_sets(), 1 << n);
            assert_eq!(e.count_cliques(), n as u64 + 1);
            let k = Graph::complete(n);
            assert_eq!(k.count_stable_sets(), n as u64 + 1);
            assert_eq!(k.count_cliques(), 1 << n);
        }
    }

    #[test]
    fn five_cycle_is_not_perfect() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(!c5.is_perfect());
        assert!(Graph::complete(5).is_perfect());
        assert!(Graph::empty(5).is_perfect());
        let p4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(p4.is_perfect());
    }

    #[test]
    fn graph_codes_enumerate_all_edge_sets() {
        let g = Graph::from_code(3, 0b111);
        assert_eq!(g, Graph::complete(3));
        assert_eq!(Graph::from_code(3, 0), Graph::empty(3));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::new(4, &[(0, 2), (1, 3)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
