//! Maximal independent sets of paths under a fixed priority order.
//!
//! Two paths conflict when they share a vertex. The conflict graph is never
//! built; conflicts are found through a per-vertex earliest-rank table.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::VertexId;
use crate::rng::{global, Purpose};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathConflictInstance {
    /// Vertex sets of the candidate paths.
    pub paths: Vec<Vec<VertexId>>,
    /// `rank[p]` is the position of path `p` in the processing order.
    pub rank: Vec<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisRoundTrace {
    pub rounds: usize,
    /// Vertex touches summed over all rounds.
    pub work: usize,
    /// Paths accepted in each round.
    pub accepted: Vec<Vec<usize>>,
}

impl PathConflictInstance {
    pub fn new(paths: Vec<Vec<VertexId>>, rank: Vec<u32>) -> Self {
        debug_assert!(is_permutation(&rank));
        debug_assert_eq!(paths.len(), rank.len());
        PathConflictInstance { paths, rank }
    }

    /// Identity order.
    pub fn in_order(paths: Vec<Vec<VertexId>>) -> Self {
        let rank = (0..paths.len() as u32).collect();
        PathConflictInstance { paths, rank }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn conflict(&self, a: usize, b: usize) -> bool {
        self.paths[a].iter().any(|x| self.paths[b].contains(x))
    }

    /// Path indices sorted by rank.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.len()];
        for (p, &r) in self.rank.iter().enumerate() {
            order[r as usize] = p;
        }
        order
    }

    fn vertex_bound(&self) -> usize {
        self.paths.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0)
    }
}

pub fn is_permutation(rank: &[u32]) -> bool {
    let mut seen = vec![false; rank.len()];
    rank.iter().all(|&r| (r as usize) < seen.len() && !std::mem::replace(&mut seen[r as usize], true))
}

/// Uniform random ranks for `len` items, reproducible per seed.
pub fn random_permutation(len: usize, seed: u64) -> Vec<u32> {
    let mut rng = global(seed, Purpose::Permutation);
    permutation_from(len, &mut rng)
}

pub(crate) fn permutation_from(len: usize, rng: &mut impl rand::Rng) -> Vec<u32> {
    let mut rank: Vec<u32> = (0..len as u32).collect();
    rank.shuffle(rng);
    rank
}

/// Greedy scan in rank order; accepted indices in ascending index order.
pub fn lex_first_mis(inst: &PathConflictInstance) -> Vec<usize> {
    let mut used = vec![false; inst.vertex_bound()];
    let mut out = Vec::new();
    for p in inst.order() {
        let path = &inst.paths[p];
        if path.iter().all(|&x| !used[x as usize]) {
            for &x in path {
                used[x as usize] = true;
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

pub fn parallel_greedy_mis(inst: &PathConflictInstance) -> (Vec<usize>, MisRoundTrace) {
    rounds(inst, false)
}

/// Same rounds, with the per-path tests of each round spread over the rayon pool.
pub fn parallel_greedy_mis_threaded(inst: &PathConflictInstance) -> (Vec<usize>, MisRoundTrace) {
    rounds(inst, true)
}

const NONE: u32 = u32::MAX;

fn rounds(inst: &PathConflictInstance, threaded: bool) -> (Vec<usize>, MisRoundTrace) {
    let mut earliest = vec![NONE; inst.vertex_bound()];
    let mut taken = vec![false; earliest.len()];
    let mut remaining: Vec<usize> = (0..inst.len()).collect();
    let mut trace = MisRoundTrace::default();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        trace.rounds += 1;
        for &p in &remaining {
            let r = inst.rank[p];
            for &x in &inst.paths[p] {
                let slot = &mut earliest[x as usize];
                *slot = (*slot).min(r);
            }
            trace.work += inst.paths[p].len();
        }
        let is_local_min = |p: &usize| inst.paths[*p].iter().all(|&x| earliest[x as usize] == inst.rank[*p]);
        let batch: Vec<usize> = if threaded {
            remaining.par_iter().copied().filter(|p| is_local_min(p)).collect()
        } else {
            remaining.iter().copied().filter(is_local_min).collect()
        };
        for &p in &batch {
            for &x in &inst.paths[p] {
                taken[x as usize] = true;
            }
        }
        for &p in &remaining {
            for &x in &inst.paths[p] {
                earliest[x as usize] = NONE;
            }
        }
        trace.work += remaining.iter().map(|&p| inst.paths[p].len()).sum::<usize>();
        remaining.retain(|&p| inst.paths[p].iter().all(|&x| !taken[x as usize]));
        out.extend_from_slice(&batch);
        trace.accepted.push(batch);
    }
    out.sort_unstable();
    (out, trace)
}
