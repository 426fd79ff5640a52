//! Deterministic hitting sets and the deterministic spanner build that uses
//! them to pick centers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{BuildError, HittingError};
use crate::fan::{PathFan, ScanOrder};
use crate::graph::{Graph, VertexId};
use crate::meta::{check_params, Engine, MetaOutput};
use crate::result::{general_size_bound, Algo, BuildParams, GraphSummary, MisMode, SpannerResult, Variant};

fn one() -> f64 {
    1.0
}

fn single() -> usize {
    1
}

/// A family of subsets of a ground set, to be hit `beta` times each by a set
/// at most `|ground| / delta` large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingInstance {
    pub ground: Vec<u32>,
    pub sets: Vec<Vec<u32>>,
    pub delta: f64,
    #[serde(default = "single")]
    pub beta: usize,
    /// Admissibility constant.
    #[serde(default = "one")]
    pub c: f64,
}

/// Smallest admissible part size for a plain instance with `sets` sets.
pub fn part_size(c: f64, delta: f64, sets: usize) -> usize {
    let log = (sets.max(1) as f64).ln().ceil().max(1.0);
    (c * delta * log).ceil() as usize
}

impl HittingInstance {
    /// Minimum set size: `beta` parts, each admissible for `beta * len` sets.
    pub fn min_set_size(&self) -> usize {
        self.beta * part_size(self.c, self.delta, self.sets.len() * self.beta)
    }

    fn validate(&self) -> Result<(), HittingError> {
        if !(self.delta.is_finite() && self.delta >= 1.0) {
            return Err(HittingError::Parameter(format!("delta must be at least 1, got {}", self.delta)));
        }
        if self.beta == 0 || !(self.c.is_finite() && self.c > 0.0) {
            return Err(HittingError::Parameter("beta and c must be positive".into()));
        }
        let mut ground = self.ground.clone();
        ground.sort_unstable();
        ground.dedup();
        let needed = self.min_set_size();
        for (index, set) in self.sets.iter().enumerate() {
            if let Some(&element) = set.iter().find(|e| ground.binary_search(e).is_err()) {
                return Err(HittingError::OutsideGround { index, element });
            }
            let size = distinct(set).len();
            if size < needed {
                return Err(HittingError::Inadmissible { index, size, needed });
            }
        }
        Ok(())
    }
}

fn distinct(set: &[u32]) -> Vec<u32> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Plain instance (`beta = 1`): every set is hit at least once.
pub fn hitting_set(inst: &HittingInstance) -> Result<Vec<u32>, HittingError> {
    if inst.beta != 1 {
        return Err(HittingError::Parameter(format!("plain hitting set needs beta = 1, got {}", inst.beta)));
    }
    inst.validate()?;
    let sets: Vec<Vec<u32>> = inst.sets.iter().map(|s| distinct(s)).collect();
    Ok(greedy(&inst.ground, &sets))
}

/// Every set is hit at least `beta` times: each set is split into `beta`
/// near-equal parts and the parts are hit once each.
pub fn beta_hitting_set(inst: &HittingInstance) -> Result<Vec<u32>, HittingError> {
    inst.validate()?;
    let mut parts = Vec::with_capacity(inst.sets.len() * inst.beta);
    for set in &inst.sets {
        let set = distinct(set);
        let (base, extra) = (set.len() / inst.beta, set.len() % inst.beta);
        let mut start = 0;
        for j in 0..inst.beta {
            let len = base + usize::from(j < extra);
            parts.push(set[start..start + len].to_vec());
            start += len;
        }
    }
    Ok(greedy(&inst.ground, &parts))
}

/// Greedy max-coverage, smallest id first on ties, followed by dropping picks
/// that every set they hit can spare.
fn greedy(ground: &[u32], sets: &[Vec<u32>]) -> Vec<u32> {
    let ground = distinct(ground);
    let index = |e: u32| ground.binary_search(&e).expect("validated");
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ground.len()];
    for (j, set) in sets.iter().enumerate() {
        for &e in set {
            members[index(e)].push(j);
        }
    }
    let mut count: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        count.iter().enumerate().filter(|(_, &c)| c > 0).map(|(x, &c)| (c, Reverse(x))).collect();
    let mut hit = vec![0usize; sets.len()];
    let mut picked = Vec::new();
    let mut open = sets.len();
    while open > 0 {
        let Some((c, Reverse(x))) = heap.pop() else { break };
        if c != count[x] {
            if count[x] > 0 {
                heap.push((count[x], Reverse(x)));
            }
            continue;
        }
        picked.push(x);
        count[x] = 0;
        for &j in &members[x] {
            hit[j] += 1;
            if hit[j] == 1 {
                open -= 1;
                for &e in &sets[j] {
                    let y = index(e);
                    if count[y] > 0 {
                        count[y] -= 1;
                    }
                }
            }
        }
    }
    let mut keep = vec![true; picked.len()];
    for (slot, &x) in picked.iter().enumerate().rev() {
        if members[x].iter().all(|&j| hit[j] >= 2) {
            keep[slot] = false;
            for &j in &members[x] {
                hit[j] -= 1;
            }
        }
    }
    let mut out: Vec<u32> = picked.iter().zip(&keep).filter(|(_, &k)| k).map(|(&x, _)| ground[x]).collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetConfig {
    pub f: usize,
    pub k: usize,
    pub c_k: usize,
    /// Admissibility constant of the center-selection hitting sets.
    pub hitting_constant: f64,
    pub record_states: bool,
    pub record_timings: bool,
}

impl DetConfig {
    pub fn new(f: usize, k: usize) -> Self {
        DetConfig { f, k, c_k: 20, hitting_constant: 1.0, record_states: false, record_timings: false }
    }

    pub fn quota(&self) -> usize {
        self.c_k * self.k * self.f
    }
}

pub fn build_ft_spanner_det(g: &Graph, f: usize, k: usize) -> Result<SpannerResult, BuildError> {
    build_ft_spanner_det_with(g, &DetConfig::new(f, k)).map(|out| out.result)
}

/// No sampling anywhere: every vertex exposes all of its cluster paths and the
/// next centers are a hitting set of the heads of the qualifying fans.
pub fn build_ft_spanner_det_with(g: &Graph, cfg: &DetConfig) -> Result<MetaOutput, BuildError> {
    check_params(g, cfg.f, cfg.k)?;
    if cfg.c_k == 0 || !(cfg.hitting_constant.is_finite() && cfg.hitting_constant > 0.0) {
        return Err(BuildError::Parameter("c_k and the hitting constant must be positive".into()));
    }
    let n = g.n();
    let quota = cfg.quota();
    let delta = (n as f64 / cfg.f as f64).powf(1.0 / cfg.k as f64);
    let engine = Engine { g, k: cfg.k, quota, record_states: cfg.record_states, record_timings: cfg.record_timings };
    let mut failure = None;
    let (edges, phases, states) = engine.run(
        |_, _, q| q.to_vec(),
        |_| ScanOrder::PerEdge,
        |_, prev: &[bool], fans: &[Option<PathFan>]| {
            let candidates = fans.iter().flatten().count();
            // sizes admissible for all fans are admissible for the qualifying subset
            let need = quota * part_size(cfg.hitting_constant, delta, candidates * quota);
            let mut eligible = vec![false; n];
            let mut sets = Vec::new();
            for fan in fans.iter().flatten() {
                if fan.shortcut.len() >= need {
                    eligible[fan.owner as usize] = true;
                    sets.push(fan.shortcut[..need].iter().map(|p| p.head()).collect::<Vec<VertexId>>());
                }
            }
            let ground: Vec<u32> = (0..n as u32).filter(|&s| prev[s as usize]).collect();
            let inst = HittingInstance { ground, sets, delta, beta: quota, c: cfg.hitting_constant };
            let mut centers = vec![false; n];
            match beta_hitting_set(&inst) {
                Ok(hit) => {
                    for s in hit {
                        centers[s as usize] = true;
                    }
                }
                Err(e) => failure = Some(e),
            }
            (centers, Some(eligible))
        },
    );
    if let Some(e) = failure {
        return Err(BuildError::Parameter(format!("center selection failed: {e}")));
    }
    let result = SpannerResult {
        algo: Algo::MetaDet,
        params: BuildParams {
            f: cfg.f,
            k: cfg.k,
            seed: None,
            variant: Variant::Sequential,
            mis: MisMode::Scan,
            c_k: cfg.c_k,
            c_s: 0,
            cluster_quota: quota,
            samples_per_vertex: 0,
            sample_probability: 1.0 / delta,
            hitting_constant: Some(cfg.hitting_constant),
        },
        graph: GraphSummary::from(g),
        size_bound: general_size_bound(n, cfg.f, cfg.k, 8.0, edges.len()),
        edges,
        phases,
        warmup: None,
    };
    Ok(MetaOutput { result, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphSpec, WeightSpec};

    #[test]
    fn identical_sets_need_one_element() {
        let ground: Vec<u32> = (0..10).collect();
        let inst = HittingInstance { ground: ground.clone(), sets: vec![ground; 3], delta: 5.0, beta: 1, c: 1.0 };
        assert_eq!(hitting_set(&inst).unwrap(), vec![0]);
    }

    #[test]
    fn disjoint_sets_need_one_each() {
        // part size for 3 sets, delta 2: ceil(2 * ceil(ln 3)) = 4
        let sets: Vec<Vec<u32>> = (0..3).map(|j| (4 * j..4 * j + 4).collect()).collect();
        let inst = HittingInstance { ground: (0..12).collect(), sets, delta: 2.0, beta: 1, c: 1.0 };
        let r = hitting_set(&inst).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.len() as f64 <= 12.0 / 2.0);
    }

    #[test]
    fn inadmissible_set_is_named() {
        let inst = HittingInstance {
            ground: (0..20).collect(),
            sets: vec![(0..10).collect(), vec![1]],
            delta: 2.0,
            beta: 1,
            c: 1.0,
        };
        assert!(matches!(hitting_set(&inst), Err(HittingError::Inadmissible { index: 1, .. })));
        let inst = HittingInstance { ground: (0..4).collect(), sets: vec![vec![9, 1, 2]], delta: 1.0, beta: 1, c: 1.0 };
        assert!(matches!(hitting_set(&inst), Err(HittingError::OutsideGround { index: 0, element: 9 })));
    }

    #[test]
    fn beta_copies_of_the_whole_ground() {
        let ground: Vec<u32> = (0..40).collect();
        let inst = HittingInstance { ground: ground.clone(), sets: vec![ground; 4], delta: 2.0, beta: 3, c: 1.0 };
        let r = beta_hitting_set(&inst).unwrap();
        assert!(r.len() >= 3 && r.len() <= 20);
    }

    #[test]
    fn deterministic_build_is_reproducible_and_keeps_trees() {
        let g = generate(&GraphSpec::Tree { n: 40 }, WeightSpec::Unit, 1).unwrap();
        assert_eq!(build_ft_spanner_det(&g, 1, 2).unwrap().len(), g.m());
        let g = generate(&GraphSpec::Gnp { n: 60, p: 0.5 }, WeightSpec::Uniform { lo: 1, hi: 9 }, 3).unwrap();
        let a = build_ft_spanner_det(&g, 1, 2).unwrap();
        let b = build_ft_spanner_det(&g, 1, 2).unwrap();
        assert_eq!(a, b);
    }
}
