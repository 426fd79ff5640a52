//! The k-phase fault-tolerant clustering build of a (2k-1)-spanner.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::BuildError;
use crate::fan::{build_fan, light_edges, sample_indices, select_clusters, Marks, PathFan, ScanOrder};
use crate::graph::{EdgeKey, EdgeSet, Graph, Incidence, VertexId};
use crate::path::Path;
use crate::result::{
    ceil_log2, general_size_bound, Algo, BuildParams, GraphSummary, MisMode, PhaseTrace, SpannerResult, Variant,
};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, PartialEq)]
pub struct MetaConfig {
    pub f: usize,
    pub k: usize,
    pub seed: u64,
    pub variant: Variant,
    pub mis: MisMode,
    /// `K_f = c_k * k * f`.
    pub c_k: usize,
    /// Samples per vertex are `c_s * ceil(log2 n)`.
    pub c_s: usize,
    /// Overrides the center probability `(f / n)^(1/k)`.
    pub p: Option<f64>,
    pub record_states: bool,
    pub record_timings: bool,
}

impl MetaConfig {
    pub fn new(f: usize, k: usize, seed: u64) -> Self {
        MetaConfig {
            f,
            k,
            seed,
            variant: Variant::Sequential,
            mis: MisMode::Scan,
            c_k: 20,
            c_s: 4,
            p: None,
            record_states: false,
            record_timings: false,
        }
    }

    pub fn quota(&self) -> usize {
        self.c_k * self.k * self.f
    }
}

/// Clustering state after a phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub phase: usize,
    /// `Z_i` as a membership mask.
    pub centers: Vec<bool>,
    /// `V_i`.
    pub clustered: Vec<bool>,
    /// `Q_i(v)`, empty for unclustered vertices.
    pub clusters: Vec<Vec<Path>>,
    /// `H_i`.
    pub spanner: EdgeSet,
    /// `R_i`.
    pub remaining: EdgeSet,
    /// Fans computed during this phase, indexed by owner.
    pub fans: Vec<Option<PathFan>>,
}

impl PhaseState {
    pub fn initial(g: &Graph) -> Self {
        let n = g.n();
        PhaseState {
            phase: 0,
            centers: vec![true; n],
            clustered: vec![true; n],
            clusters: g.vertices().map(|v| vec![Path::trivial(v)]).collect(),
            spanner: EdgeSet::empty(g.m()),
            remaining: EdgeSet::full(g.m()),
            fans: vec![None; n],
        }
    }

    pub fn center_list(&self) -> Vec<VertexId> {
        ids(&self.centers)
    }

    pub fn clustered_list(&self) -> Vec<VertexId> {
        ids(&self.clustered)
    }

    /// Members of the tree `T_i(s)` keyed by the vertex whose path it is.
    pub fn tree(&self, s: VertexId) -> Vec<(VertexId, &Path)> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(v, q)| q.iter().filter(move |p| p.head() == s).map(move |p| (v as VertexId, p)))
            .collect()
    }
}

fn ids(mask: &[bool]) -> Vec<VertexId> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v as VertexId).collect()
}

#[derive(Debug, Clone)]
pub struct MetaOutput {
    pub result: SpannerResult,
    /// Phase 0 through phase k when recording was requested.
    pub states: Vec<PhaseState>,
}

pub fn build_ft_spanner(g: &Graph, cfg: &MetaConfig) -> Result<SpannerResult, BuildError> {
    build_ft_spanner_detailed(g, cfg).map(|out| out.result)
}

pub fn build_ft_spanner_detailed(g: &Graph, cfg: &MetaConfig) -> Result<MetaOutput, BuildError> {
    check_params(g, cfg.f, cfg.k)?;
    if cfg.c_k == 0 || cfg.c_s == 0 {
        return Err(BuildError::Parameter("c_k and c_s must be positive".into()));
    }
    let p = cfg.p.unwrap_or_else(|| (cfg.f as f64 / g.n() as f64).powf(1.0 / cfg.k as f64));
    if !(0.0..=1.0).contains(&p) {
        return Err(BuildError::Parameter(format!("center probability {p} outside [0, 1]")));
    }
    let draws = cfg.c_s * ceil_log2(g.n());
    let seed = cfg.seed;
    let engine = Engine {
        g,
        k: cfg.k,
        quota: cfg.quota(),
        record_states: cfg.record_states,
        record_timings: cfg.record_timings,
    };
    let (edges, phases, states) = engine.run(
        |phase, u, q| match phase {
            1 => q.to_vec(),
            _ => sample_indices(seed, u, phase as u32, q.len(), draws).into_iter().map(|j| q[j].clone()).collect(),
        },
        |phase| ScanOrder::for_variant(cfg.variant, cfg.mis, seed, phase as u32),
        |phase, prev, _fans| {
            let centers =
                prev.iter().enumerate().map(|(s, &was)| was && center_coin(seed, s as VertexId, phase, p)).collect();
            (centers, None)
        },
    );
    let result = SpannerResult {
        algo: Algo::Meta,
        params: BuildParams {
            f: cfg.f,
            k: cfg.k,
            seed: Some(seed),
            variant: cfg.variant,
            mis: cfg.mis,
            c_k: cfg.c_k,
            c_s: cfg.c_s,
            cluster_quota: cfg.quota(),
            samples_per_vertex: draws,
            sample_probability: p,
            hitting_constant: None,
        },
        graph: GraphSummary::from(g),
        size_bound: general_size_bound(g.n(), cfg.f, cfg.k, 8.0, edges.len()),
        edges,
        phases,
        warmup: None,
    };
    Ok(MetaOutput { result, states })
}

/// Whether center `s` survives into `Z_phase`; the draw depends only on `(seed, s, phase)`.
pub fn center_coin(seed: u64, s: VertexId, phase: usize, p: f64) -> bool {
    use rand::Rng;
    stream(seed, s, phase as u32, Purpose::Center).gen_bool(p)
}

pub fn check_params(g: &Graph, f: usize, k: usize) -> Result<(), BuildError> {
    if f == 0 || f >= g.n() {
        return Err(BuildError::FaultBudget { f, n: g.n() });
    }
    if k < 2 {
        return Err(BuildError::StretchParameter(k));
    }
    Ok(())
}

/// Remaining incident edges of `v`, ascending by key.
pub fn remaining_incident(g: &Graph, v: VertexId, remaining: &EdgeSet) -> Vec<Incidence> {
    g.incident(v).iter().copied().filter(|inc| remaining.contains(inc.edge)).collect()
}

/// The heaviest edge key over a vertex's cluster paths.
pub fn heaviest_cluster_edge(g: &Graph, q: &[Path]) -> Option<EdgeKey> {
    q.iter().flat_map(|p| p.edges()).map(|&e| g.edge(e).key()).max()
}

pub(crate) struct Engine<'g> {
    pub g: &'g Graph,
    pub k: usize,
    pub quota: usize,
    pub record_states: bool,
    pub record_timings: bool,
}

/// `Z_i` and, optionally, which vertices may cluster.
pub(crate) type CenterChoice = (Vec<bool>, Option<Vec<bool>>);

impl Engine<'_> {
    /// Runs phases 1..=k. `sample(phase, u, Q(u))` yields `S(u)`, `order(phase)` the
    /// Step 1 scan, `choose(phase, Z_{i-1}, fans)` the next centers.
    pub fn run<S, O, C>(&self, sample: S, order: O, mut choose: C) -> (Vec<u32>, Vec<PhaseTrace>, Vec<PhaseState>)
    where
        S: Fn(usize, VertexId, &[Path]) -> Vec<Path> + Sync,
        O: Fn(usize) -> ScanOrder + Sync,
        C: FnMut(usize, &[bool], &[Option<PathFan>]) -> CenterChoice,
    {
        let g = self.g;
        let n = g.n();
        let mut state = PhaseState::initial(g);
        let mut states = Vec::new();
        let mut traces = Vec::new();
        if self.record_states {
            states.push(state.clone());
        }
        for phase in 1..=self.k {
            let started = Instant::now();
            let prev_clustered = state.clustered.clone();
            let samples: Vec<Vec<Path>> = (0..n)
                .into_par_iter()
                .map(|u| if prev_clustered[u] { sample(phase, u as VertexId, &state.clusters[u]) } else { Vec::new() })
                .collect();
            let r_lists: Vec<Vec<Incidence>> = (0..n)
                .into_par_iter()
                .map(|v| {
                    if prev_clustered[v] {
                        remaining_incident(g, v as VertexId, &state.remaining)
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let scan = order(phase);
            let mut fans: Vec<Option<PathFan>> = (0..n)
                .into_par_iter()
                .map_init(
                    || Marks::new(n),
                    |marks, v| {
                        prev_clustered[v].then(|| {
                            build_fan(
                                g,
                                v as VertexId,
                                &state.clusters[v],
                                &r_lists[v],
                                |u| &samples[u as usize][..],
                                scan,
                                marks,
                            )
                        })
                    },
                )
                .collect();

            let (centers, eligible) =
                if phase == self.k { (vec![false; n], None) } else { choose(phase, &state.centers, &fans) };

            let quota = self.quota;
            let selections: Vec<(Option<Vec<Path>>, Vec<u32>)> = fans
                .par_iter_mut()
                .zip(r_lists.par_iter())
                .enumerate()
                .map_init(
                    || Marks::new(n),
                    |marks, (v, (fan, r))| match fan {
                        None => (None, Vec::new()),
                        Some(fan) => {
                            let ok = eligible.as_ref().is_none_or(|e| e[v]);
                            let q = select_clusters(fan, quota, ok, |h| centers[h as usize]);
                            let le = light_edges(fan, r, marks);
                            (q, le)
                        }
                    },
                )
                .collect();

            let mut spanner = state.spanner.clone();
            let mut tree_edges = EdgeSet::empty(g.m());
            let mut le_edges = EdgeSet::empty(g.m());
            let mut clustered = vec![false; n];
            let mut clusters = vec![Vec::new(); n];
            for (v, (q, le)) in selections.into_iter().enumerate() {
                for e in le {
                    le_edges.insert(e);
                    spanner.insert(e);
                }
                if let Some(q) = q {
                    for p in &q {
                        for &e in p.edges() {
                            tree_edges.insert(e);
                            spanner.insert(e);
                        }
                    }
                    clustered[v] = true;
                    clusters[v] = q;
                }
            }

            let heaviest: Vec<Option<EdgeKey>> = clusters.iter().map(|q| heaviest_cluster_edge(g, q)).collect();
            let mut remaining = EdgeSet::empty(g.m());
            for e in state.remaining.iter() {
                let edge = g.edge(e);
                let (a, b) = (edge.u as usize, edge.v as usize);
                if clustered[a] && clustered[b] && !spanner.contains(e) {
                    let key = edge.key();
                    if heaviest[a].is_none_or(|h| key > h) && heaviest[b].is_none_or(|h| key > h) {
                        remaining.insert(e);
                    }
                }
            }

            let cutoffs: Vec<usize> = fans.iter().flatten().map(|f| f.cutoff).collect();
            traces.push(PhaseTrace {
                phase,
                centers: centers.iter().filter(|&&c| c).count(),
                clustered: clustered.iter().filter(|&&c| c).count(),
                new_edges: spanner.len() - state.spanner.len(),
                tree_edges: tree_edges.len(),
                le_edges: le_edges.len(),
                remaining: remaining.len(),
                max_cutoff: cutoffs.iter().copied().max().unwrap_or(0),
                mean_cutoff: if cutoffs.is_empty() {
                    0.0
                } else {
                    cutoffs.iter().sum::<usize>() as f64 / cutoffs.len() as f64
                },
                wall_ms: self.record_timings.then(|| started.elapsed().as_secs_f64() * 1e3),
            });
            state = PhaseState {
                phase,
                centers,
                clustered,
                clusters,
                spanner,
                remaining,
                fans: if self.record_states { fans } else { Vec::new() },
            };
            if self.record_states {
                states.push(state.clone());
                state.fans = Vec::new();
            }
        }
        (state.spanner.to_vec(), traces, states)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphSpec, WeightSpec};

    #[test]
    fn tree_is_kept_whole() {
        let g = generate(&GraphSpec::Tree { n: 50 }, WeightSpec::Uniform { lo: 1, hi: 9 }, 4).unwrap();
        for k in 2..=4 {
            let mut cfg = MetaConfig::new(1, k, 3);
            cfg.c_k = 1;
            assert_eq!(build_ft_spanner(&g, &cfg).unwrap().len(), g.m());
        }
    }

    #[test]
    fn last_phase_leaves_nothing() {
        let g = generate(&GraphSpec::Gnp { n: 80, p: 0.3 }, WeightSpec::Uniform { lo: 1, hi: 30 }, 2).unwrap();
        let mut cfg = MetaConfig::new(1, 3, 5);
        cfg.c_k = 1;
        let r = build_ft_spanner(&g, &cfg).unwrap();
        assert_eq!(r.phases.len(), 3);
        assert_eq!(r.phases[2].remaining, 0);
        assert_eq!(r.phases[2].centers, 0);
        assert_eq!(r.phases[2].clustered, 0);
        assert!(r.len() <= g.m());
        assert!(r.phases[0].clustered > 0, "small quota should cluster someone");
    }

    #[test]
    fn parameters_checked() {
        let g = generate(&GraphSpec::Complete { n: 5 }, WeightSpec::Unit, 0).unwrap();
        assert!(matches!(build_ft_spanner(&g, &MetaConfig::new(1, 1, 0)), Err(BuildError::StretchParameter(1))));
        assert!(matches!(build_ft_spanner(&g, &MetaConfig::new(5, 2, 0)), Err(BuildError::FaultBudget { .. })));
    }

    #[test]
    fn variants_with_fixed_scan_agree() {
        let g = generate(&GraphSpec::Gnp { n: 60, p: 0.4 }, WeightSpec::Uniform { lo: 1, hi: 40 }, 8).unwrap();
        let mut cfg = MetaConfig::new(1, 3, 1);
        cfg.c_k = 1;
        let seq = build_ft_spanner(&g, &cfg).unwrap();
        cfg.variant = Variant::Modified;
        let modi = build_ft_spanner(&g, &cfg).unwrap();
        assert_eq!(seq.edges, modi.edges);
    }
}
