use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, EdgeKey, Graph, VertexId, Weight};

/// A simple path stored head-first: `vertices[0]` is the head, the last entry
/// is the tail, and `edges[j]` joins `vertices[j]` and `vertices[j + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathError {
    Empty,
    NotAdjacent(VertexId, VertexId),
    RepeatedVertex(VertexId),
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path { vertices: vec![v], edges: Vec::new() }
    }

    /// Looks up every consecutive edge in `g`.
    pub fn from_vertices(g: &Graph, vertices: Vec<VertexId>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for pair in vertices.windows(2) {
            let id = g.find_edge(pair[0], pair[1]).ok_or(PathError::NotAdjacent(pair[0], pair[1]))?;
            edges.push(id);
        }
        let path = Path { vertices, edges };
        if let Some(v) = path.repeated_vertex() {
            return Err(PathError::RepeatedVertex(v));
        }
        Ok(path)
    }

    /// Unchecked constructor; see [`Path::is_valid_in`].
    pub fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Path { vertices, edges }
    }

    fn repeated_vertex(&self) -> Option<VertexId> {
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
    }

    #[inline]
    pub fn head(&self) -> VertexId {
        self.vertices[0]
    }

    #[inline]
    pub fn tail(&self) -> VertexId {
        *self.vertices.last().expect("paths are non-empty")
    }

    /// Number of edges.
    #[inline]
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    #[inline]
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    #[inline]
    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    pub fn last_key(&self, g: &Graph) -> Option<EdgeKey> {
        self.last_edge().map(|e| g.edge(e).key())
    }

    pub fn length(&self, g: &Graph) -> Weight {
        self.edges.iter().map(|&e| g.edge(e).w).sum()
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// The prefix `P[., x]` ending at vertex `x`.
    pub fn prefix_to(&self, x: VertexId) -> Option<Path> {
        let pos = self.position(x)?;
        Some(Path { vertices: self.vertices[..=pos].to_vec(), edges: self.edges[..pos].to_vec() })
    }

    /// `self ∘ (tail, next)` through edge `edge`.
    pub fn extend(&self, next: VertexId, edge: EdgeId) -> Path {
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.extend_from_slice(&self.vertices);
        vertices.push(next);
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.extend_from_slice(&self.edges);
        edges.push(edge);
        Path { vertices, edges }
    }

    /// Concatenation `self ∘ other`; requires `t(self) = h(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.tail() != other.head() {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path { vertices, edges })
    }

    /// Whether the two paths share a vertex other than `except`.
    pub fn intersects_except(&self, other: &Path, except: VertexId) -> bool {
        self.vertices.iter().any(|&x| x != except && other.contains(x))
    }

    /// Weights strictly increase (by edge key) from head to tail.
    pub fn is_monotone(&self, g: &Graph) -> bool {
        self.edges.windows(2).all(|w| g.edge(w[0]).key() < g.edge(w[1]).key())
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.vertices.len() == self.edges.len() + 1
            && self.edges.iter().zip(self.vertices.windows(2)).all(|(&e, pair)| {
                (e as usize) < g.m() && {
                    let edge = g.edge(e);
                    edge.touches(pair[0]) && edge.touches(pair[1])
                }
            })
            && self.repeated_vertex().is_none()
    }
}
