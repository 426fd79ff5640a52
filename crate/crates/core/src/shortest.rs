//! Weighted shortest paths with vertex faults applied as a traversal filter.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::GraphError;
use crate::graph::{EdgeSet, FaultSet, Graph, VertexId, Weight};

/// `dist_{G \ F}(u, v)`; `None` stands for an infinite distance.
pub fn dist(g: &Graph, u: VertexId, v: VertexId, excluded: &FaultSet) -> Result<Option<Weight>, GraphError> {
    for x in [u, v] {
        if x as usize >= g.n() {
            return Err(GraphError::NoSuchVertex { vertex: x, n: g.n() });
        }
        if excluded.contains(x) {
            return Err(GraphError::EndpointExcluded(x));
        }
    }
    let mut search = Dijkstra::new(g.n());
    let blocked = excluded.mask(g.n());
    Ok(search.distance(g, u, v, None, &blocked, None))
}

/// Reusable Dijkstra workspace. Each query touches only the vertices it
/// settles, so repeated queries on small neighbourhoods stay cheap.
#[derive(Debug, Clone)]
pub struct Dijkstra {
    dist: Vec<Weight>,
    parent: Vec<(VertexId, u32)>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(Weight, VertexId)>>,
}

const UNSEEN: Weight = Weight::MAX;

impl Dijkstra {
    pub fn new(n: usize) -> Self {
        Dijkstra {
            dist: vec![UNSEEN; n],
            parent: vec![(VertexId::MAX, u32::MAX); n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.dist[x as usize] = UNSEEN;
            self.parent[x as usize] = (VertexId::MAX, u32::MAX);
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs until `dst` is settled or every remaining label exceeds `cutoff`.
    /// Returns whether `dst` was reached within the cutoff.
    fn run(
        &mut self,
        g: &Graph,
        src: VertexId,
        dst: VertexId,
        allowed: Option<&EdgeSet>,
        blocked: &[bool],
        cutoff: Option<Weight>,
    ) -> bool {
        self.reset();
        if blocked[src as usize] || blocked[dst as usize] {
            return false;
        }
        let limit = cutoff.unwrap_or(Weight::MAX - 1);
        self.dist[src as usize] = 0;
        self.touched.push(src);
        self.heap.push(Reverse((0, src)));
        while let Some(Reverse((d, x))) = self.heap.pop() {
            if d > self.dist[x as usize] {
                continue;
            }
            if x == dst {
                return true;
            }
            for inc in g.incident(x) {
                if blocked[inc.neighbor as usize] {
                    continue;
                }
                if let Some(mask) = allowed {
                    if !mask.contains(inc.edge) {
                        continue;
                    }
                }
                let nd = d.saturating_add(g.edge(inc.edge).w);
                if nd > limit {
                    continue;
                }
                let slot = &mut self.dist[inc.neighbor as usize];
                if nd < *slot {
                    if *slot == UNSEEN {
                        self.touched.push(inc.neighbor);
                    }
                    *slot = nd;
                    self.parent[inc.neighbor as usize] = (x, inc.edge);
                    self.heap.push(Reverse((nd, inc.neighbor)));
                }
            }
        }
        false
    }

    pub fn distance(
        &mut self,
        g: &Graph,
        src: VertexId,
        dst: VertexId,
        allowed: Option<&EdgeSet>,
        blocked: &[bool],
        cutoff: Option<Weight>,
    ) -> Option<Weight> {
        self.run(g, src, dst, allowed, blocked, cutoff).then(|| self.dist[dst as usize])
    }

    /// Like [`Dijkstra::distance`] but also returns the vertex sequence `src..=dst`.
    pub fn path(
        &mut self,
        g: &Graph,
        src: VertexId,
        dst: VertexId,
        allowed: Option<&EdgeSet>,
        blocked: &[bool],
        cutoff: Option<Weight>,
    ) -> Option<(Weight, Vec<VertexId>)> {
        if !self.run(g, src, dst, allowed, blocked, cutoff) {
            return None;
        }
        let mut seq = vec![dst];
        let mut x = dst;
        while x != src {
            x = self.parent[x as usize].0;
            seq.push(x);
        }
        seq.reverse();
        Some((self.dist[dst as usize], seq))
    }
}

/// Connected-component labels of `g` restricted to `allowed` edges and
/// unblocked vertices; blocked vertices get `u32::MAX`.
pub fn components(g: &Graph, allowed: Option<&EdgeSet>, blocked: &[bool]) -> Vec<u32> {
    let mut label = vec![u32::MAX; g.n()];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in g.vertices() {
        if blocked[s as usize] || label[s as usize] != u32::MAX {
            continue;
        }
        label[s as usize] = next;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for inc in g.incident(x) {
                let y = inc.neighbor as usize;
                if blocked[y] || label[y] != u32::MAX || allowed.is_some_and(|m| !m.contains(inc.edge)) {
                    continue;
                }
                label[y] = next;
                stack.push(inc.neighbor);
            }
        }
        next += 1;
    }
    label
}
