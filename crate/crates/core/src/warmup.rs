//! Two-step construction of an f-vertex-fault-tolerant 3-spanner.
//!
//! Step one samples star centers and clusters every vertex with at least `4f`
//! sampled neighbours into the clusters of its `4f` lightest ones. Step two
//! scans the remaining edges of each clustered vertex in weight order and keeps
//! an edge only when the neighbour exposes a center not yet observed.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;

use crate::error::BuildError;
use crate::graph::{EdgeId, EdgeKey, EdgeSet, Graph, VertexId};
use crate::result::{
    ceil_log2, warmup_size_bound, Algo, BuildParams, GraphSummary, SizeBound, SpannerResult, WarmupTrace,
};
use crate::result::{MisMode, Variant};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, PartialEq)]
pub struct WarmupConfig {
    pub f: usize,
    pub seed: u64,
    /// Samples per vertex are `c_s * ceil(log2 n)`.
    pub c_s: usize,
    /// Overrides the center probability `sqrt(f / n)`.
    pub p: Option<f64>,
    pub record_timings: bool,
}

impl WarmupConfig {
    pub fn new(f: usize, seed: u64) -> Self {
        WarmupConfig { f, seed, c_s: 4, p: None, record_timings: false }
    }
}

/// Output of step one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarClustering {
    pub centers: Vec<VertexId>,
    /// `S(v)` as `(center, edge)` pairs for clustered vertices, ascending by edge key.
    pub selected: Vec<Option<Vec<(VertexId, EdgeId)>>>,
    pub unclustered: Vec<VertexId>,
}

impl StarClustering {
    pub fn is_clustered(&self, v: VertexId) -> bool {
        self.selected[v as usize].is_some()
    }

    /// `C(s) = { v | s ∈ S(v) }`.
    pub fn members(&self, s: VertexId) -> Vec<VertexId> {
        self.selected
            .iter()
            .enumerate()
            .filter(|(_, sel)| sel.as_ref().is_some_and(|list| list.iter().any(|&(c, _)| c == s)))
            .map(|(v, _)| v as VertexId)
            .collect()
    }
}

/// Output of step two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyScanState {
    /// `S'(u)`, with repetitions.
    pub samples: Vec<Vec<VertexId>>,
    /// `L(v)` in insertion order.
    pub observed: Vec<Vec<VertexId>>,
    /// `Ẽ(v)` in scan order.
    pub accepted: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone)]
pub struct WarmupOutput {
    pub result: SpannerResult,
    pub clustering: StarClustering,
    pub scan: GreedyScanState,
    /// `LE(v)` per vertex.
    pub light_edges: Vec<Vec<EdgeId>>,
}

pub fn build_3spanner(g: &Graph, cfg: &WarmupConfig) -> Result<SpannerResult, BuildError> {
    build_3spanner_detailed(g, cfg).map(|out| out.result)
}

pub fn build_3spanner_detailed(g: &Graph, cfg: &WarmupConfig) -> Result<WarmupOutput, BuildError> {
    let n = g.n();
    let f = cfg.f;
    if f == 0 || f >= n {
        return Err(BuildError::FaultBudget { f, n });
    }
    if cfg.c_s == 0 {
        return Err(BuildError::Parameter("c_s must be positive".into()));
    }
    let p = cfg.p.unwrap_or_else(|| (f as f64 / n as f64).sqrt());
    if !(0.0..=1.0).contains(&p) {
        return Err(BuildError::Parameter(format!("center probability {p} outside [0, 1]")));
    }
    let started = Instant::now();
    let quota = 4 * f;
    let num_samples = cfg.c_s * ceil_log2(n);

    let is_center: Vec<bool> = g.vertices().map(|v| stream(cfg.seed, v, 0, Purpose::Center).gen_bool(p)).collect();
    let centers: Vec<VertexId> = g.vertices().filter(|&v| is_center[v as usize]).collect();

    let mut selected = vec![None; n];
    let mut unclustered = Vec::new();
    for v in g.vertices() {
        let picks: Vec<(VertexId, EdgeId)> = g
            .incident(v)
            .iter()
            .filter(|inc| is_center[inc.neighbor as usize])
            .take(quota)
            .map(|inc| (inc.neighbor, inc.edge))
            .collect();
        if picks.len() == quota {
            selected[v as usize] = Some(picks);
        } else {
            unclustered.push(v);
        }
    }

    let mut spanner = EdgeSet::empty(g.m());
    let mut light_edges = vec![Vec::new(); n];
    for v in g.vertices() {
        let le: Vec<EdgeId> = match &selected[v as usize] {
            None => g.incident(v).iter().map(|inc| inc.edge).collect(),
            Some(picks) => {
                let max_key: EdgeKey = picks.iter().map(|&(_, e)| g.edge(e).key()).max().expect("quota >= 4");
                for &(_, e) in picks {
                    spanner.insert(e);
                }
                g.incident(v).iter().take_while(|inc| g.edge(inc.edge).key() < max_key).map(|inc| inc.edge).collect()
            }
        };
        for &e in &le {
            spanner.insert(e);
        }
        light_edges[v as usize] = le;
    }
    let first_step_edges = spanner.len();

    let samples: Vec<Vec<VertexId>> = g
        .vertices()
        .map(|u| match &selected[u as usize] {
            None => Vec::new(),
            Some(picks) => {
                let mut rng = stream(cfg.seed, u, 0, Purpose::Sample);
                (0..num_samples).map(|_| picks[rng.gen_range(0..picks.len())].0).collect()
            }
        })
        .collect();

    let first_step = spanner.clone();
    let mut observed = vec![Vec::new(); n];
    let mut accepted = vec![Vec::new(); n];
    for v in g.vertices() {
        if selected[v as usize].is_none() {
            continue;
        }
        let mut seen = BTreeSet::new();
        for inc in g.incident(v) {
            if first_step.contains(inc.edge) {
                continue;
            }
            let fresh = samples[inc.neighbor as usize].iter().copied().filter(|s| !seen.contains(s)).min();
            if let Some(center) = fresh {
                seen.insert(center);
                observed[v as usize].push(center);
                accepted[v as usize].push(inc.edge);
                spanner.insert(inc.edge);
            }
        }
    }
    let scan_edges = spanner.len() - first_step_edges;

    let edges = spanner.to_vec();
    let result = SpannerResult {
        algo: Algo::Warmup,
        params: BuildParams {
            f,
            k: 2,
            seed: Some(cfg.seed),
            variant: Variant::Sequential,
            mis: MisMode::Scan,
            c_k: 0,
            c_s: cfg.c_s,
            cluster_quota: quota,
            samples_per_vertex: num_samples,
            sample_probability: p,
            hitting_constant: None,
        },
        graph: GraphSummary::from(g),
        size_bound: warmup_size_bound(n, f, 8.0, edges.len()),
        edges,
        phases: Vec::new(),
        warmup: Some(WarmupTrace {
            centers: centers.len(),
            unclustered: unclustered.len(),
            first_step_edges,
            scan_edges,
            wall_ms: cfg.record_timings.then(|| started.elapsed().as_secs_f64() * 1e3),
        }),
    };
    Ok(WarmupOutput {
        result,
        clustering: StarClustering { centers, selected, unclustered },
        scan: GreedyScanState { samples, observed, accepted },
        light_edges,
    })
}

/// `|E(H)|` against `c * (f n + sqrt(f) n^{3/2} log n)`.
pub fn warmup_size_report(result: &SpannerResult, c: f64) -> SizeBound {
    warmup_size_bound(result.graph.n, result.params.f, c, result.edges.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphSpec, WeightSpec};

    #[test]
    fn tree_is_kept_whole() {
        for seed in 0..5 {
            let g = generate(&GraphSpec::Tree { n: 40 }, WeightSpec::Uniform { lo: 1, hi: 20 }, seed).unwrap();
            let mut cfg = WarmupConfig::new(1, seed);
            cfg.p = Some(0.6);
            let r = build_3spanner(&g, &cfg).unwrap();
            assert_eq!(r.edges.len(), g.m());
        }
    }

    #[test]
    fn complete_graph_clusters_have_quota_size() {
        let g = generate(&GraphSpec::Complete { n: 40 }, WeightSpec::Uniform { lo: 1, hi: 100 }, 1).unwrap();
        let mut cfg = WarmupConfig::new(2, 5);
        cfg.p = Some(0.5);
        let out = build_3spanner_detailed(&g, &cfg).unwrap();
        let c = &out.clustering;
        assert!(g.vertices().any(|v| c.is_clustered(v)));
        for v in g.vertices() {
            let sampled_nbrs = g.incident(v).iter().filter(|i| c.centers.contains(&i.neighbor)).count();
            match &c.selected[v as usize] {
                Some(picks) => {
                    assert_eq!(picks.len(), 8);
                    // the 4f lightest edges into the center set
                    let expected: Vec<EdgeId> = g
                        .incident(v)
                        .iter()
                        .filter(|i| c.centers.contains(&i.neighbor))
                        .take(8)
                        .map(|i| i.edge)
                        .collect();
                    assert_eq!(picks.iter().map(|p| p.1).collect::<Vec<_>>(), expected);
                }
                None => assert!(sampled_nbrs < 8),
            }
        }
    }

    #[test]
    fn scan_bookkeeping_invariants() {
        let g = generate(&GraphSpec::Gnp { n: 60, p: 0.5 }, WeightSpec::Uniform { lo: 1, hi: 50 }, 3).unwrap();
        let mut cfg = WarmupConfig::new(1, 11);
        cfg.p = Some(0.3);
        let out = build_3spanner_detailed(&g, &cfg).unwrap();
        for v in g.vertices() {
            let obs = &out.scan.observed[v as usize];
            assert_eq!(obs.len(), out.scan.accepted[v as usize].len());
            let distinct: BTreeSet<_> = obs.iter().collect();
            assert_eq!(distinct.len(), obs.len());
            if let Some(picks) = &out.clustering.selected[v as usize] {
                let max_key = picks.iter().map(|p| g.edge(p.1).key()).max().unwrap();
                assert!(out.light_edges[v as usize].iter().all(|&e| g.edge(e).key() < max_key));
                let keys: Vec<_> = out.scan.accepted[v as usize].iter().map(|&e| g.edge(e).key()).collect();
                assert!(keys.windows(2).all(|w| w[0] < w[1]));
            }
        }
        let trace = out.result.warmup.as_ref().unwrap();
        assert_eq!(trace.first_step_edges + trace.scan_edges, out.result.edges.len());
        assert_eq!(trace.unclustered, out.clustering.unclustered.len());
    }

    #[test]
    fn rejects_degenerate_fault_budget() {
        let g = generate(&GraphSpec::Complete { n: 4 }, WeightSpec::Unit, 0).unwrap();
        assert!(matches!(build_3spanner(&g, &WarmupConfig::new(4, 0)), Err(BuildError::FaultBudget { .. })));
        assert!(matches!(build_3spanner(&g, &WarmupConfig::new(0, 0)), Err(BuildError::FaultBudget { .. })));
    }

    #[test]
    fn size_report_for_tree_and_empty_graph() {
        let g = generate(&GraphSpec::Tree { n: 30 }, WeightSpec::Unit, 2).unwrap();
        let r = build_3spanner(&g, &WarmupConfig::new(1, 0)).unwrap();
        let rep = warmup_size_report(&r, 8.0);
        assert_eq!(rep.edges, 29);
        assert!(rep.edges as f64 <= rep.bound);

        let empty = Graph::from_edges(5, &[]).unwrap();
        let r = build_3spanner(&empty, &WarmupConfig::new(1, 0)).unwrap();
        assert_eq!(warmup_size_report(&r, 8.0).edges, 0);
    }
}
