use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type Weight = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
    pub id: EdgeId,
}

impl Edge {
    /// The strict total order used wherever an edge is "lighter" or "heavier".
    #[inline]
    pub fn key(&self) -> EdgeKey {
        EdgeKey { w: self.w, id: self.id }
    }

    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }

    #[inline]
    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Weight with the edge index appended; compares lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub w: Weight,
    pub id: EdgeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: EdgeId,
}

/// Immutable undirected weighted graph. Adjacency lists are sorted by edge key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples; edge ids follow the input order.
    pub fn from_edges(n: usize, triples: &[(VertexId, VertexId, Weight)]) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(triples.len());
        let mut edges = Vec::with_capacity(triples.len());
        for (idx, &(u, v, w)) in triples.iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange { edge: idx, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: idx, vertex: u });
            }
            if w == 0 {
                return Err(GraphError::ZeroWeight { edge: idx });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { edge: idx, u, v });
            }
            let id = EdgeId::try_from(idx).map_err(|_| GraphError::TooManyEdges)?;
            edges.push(Edge { u, v, w, id });
        }
        Ok(Self::assemble(n, edges))
    }

    fn assemble(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u as usize].push(Incidence { neighbor: e.v, edge: e.id });
            adjacency[e.v as usize].push(Incidence { neighbor: e.u, edge: e.id });
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|inc| edges[inc.edge as usize].key());
        }
        Graph { n, edges, adjacency }
    }

    /// Parses the whitespace-separated `u v w` edge-list format. Lines starting
    /// with `#` and blank lines are skipped. `n` is one more than the largest id,
    /// or larger when a `# n=<count>` header says so.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut triples = Vec::new();
        let mut max_vertex: Option<VertexId> = None;
        let mut declared = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let count = comment.split_whitespace().find_map(|t| t.strip_prefix("n=")).and_then(|t| t.parse().ok());
                declared = declared.max(count.unwrap_or(0));
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: &str| GraphError::Parse { line: lineno + 1, reason: reason.to_owned() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err("expected three fields `u v w`"));
            }
            let u: VertexId = fields[0].parse().map_err(|_| parse_err("bad vertex id"))?;
            let v: VertexId = fields[1].parse().map_err(|_| parse_err("bad vertex id"))?;
            let w: i128 = fields[2].parse().map_err(|_| parse_err("bad weight"))?;
            if w < 1 || w > Weight::MAX as i128 {
                return Err(parse_err("weight must be a positive integer"));
            }
            if u == v {
                return Err(parse_err("self-loop"));
            }
            max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
            triples.push((u, v, w as Weight, lineno + 1));
        }
        let n = max_vertex.map_or(0, |m| m as usize + 1).max(declared);
        let mut seen = HashSet::with_capacity(triples.len());
        for &(u, v, _, line) in &triples {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::Parse { line, reason: format!("duplicate edge {u}-{v}") });
            }
        }
        let plain: Vec<_> = triples.iter().map(|&(u, v, w, _)| (u, v, w)).collect();
        Self::from_edges(n, &plain)
    }

    /// Inverse of [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={} m={}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    /// Incident edges of `v`, ascending by edge key.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[Incidence] {
        &self.adjacency[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.n as VertexId
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.incident(a).iter().find(|inc| inc.neighbor == b).map(|inc| inc.edge)
    }

    pub fn compare_edges(&self, a: EdgeId, b: EdgeId) -> Ordering {
        self.edge(a).key().cmp(&self.edge(b).key())
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).max().unwrap_or(1)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    /// A graph over the same vertex set keeping only `ids`; the kept edges are
    /// renumbered in ascending original-id order.
    pub fn restrict(&self, ids: &[EdgeId]) -> Graph {
        let mut sorted: Vec<EdgeId> = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let edges = sorted
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let e = self.edge(old);
                Edge { id: new as EdgeId, ..*e }
            })
            .collect();
        Self::assemble(self.n, edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edges.len())
    }
}

/// Membership mask over edge ids of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    bits: Vec<bool>,
    len: usize,
}

impl EdgeSet {
    pub fn empty(m: usize) -> Self {
        EdgeSet { bits: vec![false; m], len: 0 }
    }

    pub fn full(m: usize) -> Self {
        EdgeSet { bits: vec![true; m], len: m }
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut set = Self::empty(m);
        for id in ids {
            set.insert(id);
        }
        set
    }

    #[inline]
    pub fn insert(&mut self, id: EdgeId) -> bool {
        let slot = &mut self.bits[id as usize];
        if *slot {
            false
        } else {
            *slot = true;
            self.len += 1;
            true
        }
    }

    #[inline]
    pub fn remove(&mut self, id: EdgeId) -> bool {
        let slot = &mut self.bits[id as usize];
        if *slot {
            *slot = false;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn contains(&self, id: EdgeId) -> bool {
        self.bits[id as usize]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as EdgeId)
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.iter().all(|id| other.contains(id))
    }
}

/// A set of faulty vertices, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaultSet(Vec<VertexId>);

impl FaultSet {
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        FaultSet(vertices)
    }

    pub fn empty() -> Self {
        FaultSet(Vec::new())
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v as usize] = true;
        }
        mask
    }
}

impl FromIterator<VertexId> for FaultSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        FaultSet::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = Graph::parse_edge_list("0 1 1\n1 2 2\n0 2 4").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        let weights: Vec<_> = g.edges().iter().map(|e| e.w).collect();
        assert_eq!(weights, vec![1, 2, 4]);
        assert_eq!(g.incident(0).iter().map(|i| i.neighbor).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(g.incident(2).iter().map(|i| i.neighbor).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn empty_input_gives_empty_graph() {
        let g = Graph::parse_edge_list("").unwrap();
        assert_eq!((g.n(), g.m()), (0, 0));
        let g = Graph::parse_edge_list("# nothing here\n\n").unwrap();
        assert_eq!((g.n(), g.m()), (0, 0));
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = Graph::parse_edge_list("0 0 1").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, ref reason } if reason.contains("self-loop")));
    }

    #[test]
    fn rejects_duplicates_and_malformed_lines() {
        let err = Graph::parse_edge_list("0 1 1\n# c\n1 0 3").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        assert!(matches!(Graph::parse_edge_list("0 1").unwrap_err(), GraphError::Parse { line: 1, .. }));
        assert!(matches!(Graph::parse_edge_list("0 1 0").unwrap_err(), GraphError::Parse { line: 1, .. }));
        assert!(matches!(Graph::parse_edge_list("0 1 -3").unwrap_err(), GraphError::Parse { .. }));
        assert!(matches!(Graph::parse_edge_list("a 1 3").unwrap_err(), GraphError::Parse { .. }));
    }

    #[test]
    fn equal_weights_are_ordered_by_input_index() {
        let g = Graph::parse_edge_list("0 1 5\n0 2 5\n0 3 1").unwrap();
        let order: Vec<_> = g.incident(0).iter().map(|i| i.edge).collect();
        assert_eq!(order, vec![2, 0, 1]);
        assert_eq!(g.compare_edges(0, 1), Ordering::Less);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::parse_edge_list("0 1 3\n2 1 7\n3 0 1\n").unwrap();
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        let isolated = Graph::from_edges(6, &[(0, 1, 2)]).unwrap();
        assert_eq!(Graph::parse_edge_list(&isolated.to_edge_list()).unwrap().n(), 6);
    }

    #[test]
    fn restrict_keeps_chosen_edges() {
        let g = Graph::parse_edge_list("0 1 3\n1 2 7\n2 0 1\n").unwrap();
        let h = g.restrict(&[2, 0]);
        assert_eq!(h.m(), 2);
        assert_eq!(h.n(), 3);
        assert!(h.find_edge(1, 2).is_none());
        assert!(h.find_edge(0, 2).is_some());
    }
}
