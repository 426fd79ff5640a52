use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use vft_core::graph::{EdgeId, VertexId};

use crate::error::SimError;
use crate::network::{Network, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeLink {
    pub child: VertexId,
    pub parent: VertexId,
    pub edge: EdgeId,
}

/// Parent links of a cluster tree as registered by the children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastTree {
    pub root: VertexId,
    pub links: Vec<TreeLink>,
}

impl BroadcastTree {
    /// Hop distance of the farthest vertex reachable from the root.
    pub fn depth(&self) -> usize {
        let mut down: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for l in &self.links {
            down.entry(l.parent).or_default().push(l.child);
        }
        let mut dist = BTreeMap::from([(self.root, 0usize)]);
        let mut queue = VecDeque::from([self.root]);
        let mut depth = 0;
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            depth = depth.max(d);
            for &y in down.get(&x).into_iter().flatten() {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        depth
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastOutcome {
    /// For each vertex, the `(root, payload)` pairs it received, roots ascending.
    pub delivered: Vec<Vec<(VertexId, bool)>>,
    pub rounds: u64,
}

impl BroadcastOutcome {
    pub fn get(&self, v: VertexId, root: VertexId) -> Option<bool> {
        let list = &self.delivered[v as usize];
        list.binary_search_by_key(&root, |&(r, _)| r).ok().map(|j| list[j].1)
    }
}

/// Every root sends its bit down its tree; a vertex forwards a root's bit to
/// its registered children the first time it hears it. Two trees never share
/// a direction of an edge, so this takes one round per level.
pub fn tree_broadcast(
    net: &mut Network<'_>,
    trees: &[BroadcastTree],
    payload: &[bool],
) -> Result<BroadcastOutcome, SimError> {
    assert_eq!(trees.len(), payload.len(), "one payload bit per tree");
    let n = net.graph().n();
    let mut children: Vec<BTreeMap<VertexId, Vec<(VertexId, EdgeId)>>> = vec![BTreeMap::new(); n];
    for t in trees {
        for l in &t.links {
            let e = net.graph().edge(l.edge);
            if !(e.touches(l.parent) && e.touches(l.child) && l.parent != l.child) {
                return Err(SimError::NotIncident { vertex: l.child, edge: l.edge });
            }
            children[l.parent as usize].entry(t.root).or_default().push((l.child, l.edge));
        }
    }
    let mut delivered: Vec<BTreeMap<VertexId, bool>> = vec![BTreeMap::new(); n];
    for (t, &bit) in trees.iter().zip(payload) {
        delivered[t.root as usize].insert(t.root, bit);
        for &(_, edge) in children[t.root as usize].get(&t.root).into_iter().flatten() {
            net.send(t.root, edge, Payload::Broadcast { center: t.root, sampled: bit })?;
        }
    }
    let rounds = net.drain(|net, env| {
        let Payload::Broadcast { center, sampled } = env.payload else {
            return Err(SimError::Protocol { vertex: env.to, detail: "unexpected message during broadcast".into() });
        };
        let x = env.to as usize;
        if delivered[x].insert(center, sampled).is_none() {
            for &(_, edge) in children[x].get(&center).into_iter().flatten() {
                net.send(env.to, edge, Payload::Broadcast { center, sampled })?;
            }
        }
        Ok(())
    })?;
    let depth = trees.iter().map(BroadcastTree::depth).max().unwrap_or(0) as u64;
    if !trees.is_empty() && rounds > 2 * (depth + 1) {
        return Err(SimError::RoundBudget { phase: 0, stage: "broadcast", rounds, budget: 2 * (depth + 1) });
    }
    Ok(BroadcastOutcome { delivered: delivered.into_iter().map(|m| m.into_iter().collect()).collect(), rounds })
}
