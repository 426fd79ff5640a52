//! The phase-by-phase distributed build on top of [`Network`].
//!
//! Every node keeps only its own cluster paths, its remaining incident edges
//! and whatever arrived in its inbox. Randomness comes from the same
//! per-vertex streams as the sequential build, so the outputs coincide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use vft_core::error::BuildError;
use vft_core::fan::{build_fan, light_edges, sample_indices, select_clusters, Marks, PathFan, ScanOrder};
use vft_core::graph::{EdgeId, EdgeKey, EdgeSet, Graph, Incidence, VertexId, Weight};
use vft_core::meta::{center_coin, check_params, MetaConfig};
use vft_core::path::Path;
use vft_core::result::{
    ceil_log2, general_size_bound, Algo, BuildParams, GraphSummary, MisMode, PhaseTrace, SpannerResult, Variant,
};

use crate::broadcast::{tree_broadcast, BroadcastTree, TreeLink};
use crate::error::SimError;
use crate::log::LogEntry;
use crate::network::{Encoding, Network, Payload};

#[derive(Debug, Clone, PartialEq)]
pub struct DistConfig {
    pub f: usize,
    pub k: usize,
    pub seed: u64,
    pub c_k: usize,
    pub c_s: usize,
    /// Bandwidth is `c_b * ceil(log2 n)` bits.
    pub c_b: u32,
    pub p: Option<f64>,
    pub record_log: bool,
}

impl DistConfig {
    pub fn new(f: usize, k: usize, seed: u64) -> Self {
        DistConfig { f, k, seed, c_k: 20, c_s: 4, c_b: 4, p: None, record_log: false }
    }

    /// The sequential configuration that consumes the same random choices.
    pub fn sequential(&self) -> MetaConfig {
        let mut cfg = MetaConfig::new(self.f, self.k, self.seed);
        cfg.c_k = self.c_k;
        cfg.c_s = self.c_s;
        cfg.p = self.p;
        cfg
    }
}

/// Rounds spent in each stage of one phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StageRounds {
    pub phase: usize,
    pub paths: u64,
    pub broadcast: u64,
    pub heads: u64,
    pub status: u64,
    pub register: u64,
}

impl StageRounds {
    pub fn total(&self) -> u64 {
        self.paths + self.broadcast + self.heads + self.status + self.register
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundReport {
    pub bandwidth: u32,
    pub encoding: Encoding,
    pub total_rounds: u64,
    pub rounds_per_phase: Vec<u64>,
    pub stages: Vec<StageRounds>,
    pub max_bits: u32,
    pub messages: u64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub result: SpannerResult,
    pub report: RoundReport,
    pub log: Option<Vec<LogEntry>>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Peer {
    clustered: bool,
    added: bool,
    heavy: bool,
    weight: Option<Weight>,
    id: Option<EdgeId>,
}

#[derive(Debug, Default)]
struct Node {
    clustered: bool,
    center: bool,
    q: Vec<Path>,
    r: Vec<Incidence>,
    /// Children per tree root, as registered over time.
    children: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>>,
    sample: Vec<Path>,
    partial: BTreeMap<VertexId, (Vec<VertexId>, Vec<EdgeId>)>,
    received: BTreeMap<VertexId, Vec<Path>>,
    masks: BTreeMap<VertexId, Vec<bool>>,
    peers: BTreeMap<EdgeId, Peer>,
}

impl Node {
    fn samples_of(&self, u: VertexId) -> &[Path] {
        self.received.get(&u).map_or(&[], |p| &p[..])
    }
}

pub fn simulate_distributed_spanner(
    g: &Graph,
    f: usize,
    k: usize,
    seed: u64,
) -> Result<(SpannerResult, RoundReport), SimError> {
    simulate(g, &DistConfig::new(f, k, seed)).map(|s| (s.result, s.report))
}

pub fn simulate(g: &Graph, cfg: &DistConfig) -> Result<Simulation, SimError> {
    check_params(g, cfg.f, cfg.k)?;
    if cfg.c_k == 0 || cfg.c_s == 0 || cfg.c_b == 0 {
        return Err(BuildError::Parameter("c_k, c_s and c_b must be positive".into()).into());
    }
    let n = g.n();
    let p = cfg.p.unwrap_or_else(|| (cfg.f as f64 / n as f64).powf(1.0 / cfg.k as f64));
    if !(0.0..=1.0).contains(&p) {
        return Err(BuildError::Parameter(format!("center probability {p} outside [0, 1]")).into());
    }
    let quota = cfg.c_k * cfg.k * cfg.f;
    let draws = cfg.c_s * ceil_log2(n);
    let mut net = Network::new(g, cfg.c_b, cfg.record_log);
    let mut nodes: Vec<Node> = g
        .vertices()
        .map(|v| Node {
            clustered: true,
            center: true,
            q: vec![Path::trivial(v)],
            r: g.incident(v).to_vec(),
            ..Node::default()
        })
        .collect();
    let mut spanner = EdgeSet::empty(g.m());
    let mut stages = Vec::with_capacity(cfg.k);
    let mut traces = Vec::with_capacity(cfg.k);
    let mut marks = Marks::new(n);

    for phase in 1..=cfg.k {
        let mut rounds = StageRounds { phase, ..StageRounds::default() };
        let before = spanner.len();

        // (a) sampled paths, one vertex per message
        for (u, node) in nodes.iter_mut().enumerate() {
            node.received.clear();
            node.partial.clear();
            node.masks.clear();
            node.peers.clear();
            node.sample = if !node.clustered {
                Vec::new()
            } else if phase == 1 {
                node.q.clone()
            } else {
                sample_indices(cfg.seed, u as VertexId, phase as u32, node.q.len(), draws)
                    .into_iter()
                    .map(|j| node.q[j].clone())
                    .collect()
            };
        }
        for u in g.vertices() {
            let node = &nodes[u as usize];
            for inc in &node.r {
                for path in &node.sample {
                    let vs = path.vertices();
                    for (j, &vertex) in vs.iter().enumerate() {
                        let payload =
                            Payload::PathVertex { vertex, next: path.edges().get(j).copied(), last: j + 1 == vs.len() };
                        net.send(u, inc.edge, payload)?;
                    }
                }
            }
        }
        rounds.paths = net.drain(|_, env| {
            let Payload::PathVertex { vertex, next, last } = env.payload else {
                return Err(unexpected(env.to, "path transfer"));
            };
            let node = &mut nodes[env.to as usize];
            let (vs, es) = node.partial.entry(env.from).or_default();
            vs.push(vertex);
            match (next, last) {
                (Some(e), false) => es.push(e),
                (None, true) => {
                    let (vs, es) = node.partial.remove(&env.from).unwrap_or_default();
                    node.received.entry(env.from).or_default().push(Path::from_parts(vs, es));
                }
                _ => return Err(unexpected(env.to, "malformed path vertex")),
            }
            Ok(())
        })?;
        budget(phase, "paths", rounds.paths, (phase * draws) as u64)?;

        // (b) Step 1 and the shortcut, locally
        let mut fans: Vec<Option<PathFan>> = Vec::with_capacity(n);
        for (v, node) in nodes.iter().enumerate() {
            fans.push(node.clustered.then(|| {
                build_fan(g, v as VertexId, &node.q, &node.r, |u| node.samples_of(u), ScanOrder::PerEdge, &mut marks)
            }));
        }

        // (c) surviving centers announce themselves down their trees
        let mut known: Vec<BTreeMap<VertexId, bool>> = vec![BTreeMap::new(); n];
        if phase < cfg.k {
            let roots: Vec<VertexId> = g.vertices().filter(|&s| nodes[s as usize].center).collect();
            let mut links: BTreeMap<VertexId, Vec<TreeLink>> = BTreeMap::new();
            for (x, node) in nodes.iter().enumerate() {
                for (&root, list) in &node.children {
                    for &(child, edge) in list {
                        links.entry(root).or_default().push(TreeLink { child, parent: x as VertexId, edge });
                    }
                }
            }
            let trees: Vec<BroadcastTree> =
                roots.iter().map(|&s| BroadcastTree { root: s, links: links.remove(&s).unwrap_or_default() }).collect();
            let bits: Vec<bool> = roots.iter().map(|&s| center_coin(cfg.seed, s, phase, p)).collect();
            let outcome = tree_broadcast(&mut net, &trees, &bits).map_err(|e| match e {
                SimError::RoundBudget { rounds, budget, .. } => {
                    SimError::RoundBudget { phase, stage: "broadcast", rounds, budget }
                }
                other => other,
            })?;
            rounds.broadcast = outcome.rounds;
            budget(phase, "broadcast", rounds.broadcast, 2 * phase as u64)?;
            for (v, list) in outcome.delivered.into_iter().enumerate() {
                known[v] = list.into_iter().collect();
            }
            for (s, bit) in roots.iter().zip(&bits) {
                nodes[*s as usize].center = *bit;
            }
        } else {
            for node in &mut nodes {
                node.center = false;
            }
        }

        // (d) sampled-head masks to remaining neighbours
        if phase < cfg.k {
            let chunk = net.bandwidth as usize;
            for u in g.vertices() {
                let node = &nodes[u as usize];
                let mut mask = Vec::with_capacity(node.sample.len());
                for path in &node.sample {
                    let bit = known[u as usize].get(&path.head()).copied();
                    mask.push(bit.ok_or_else(|| unexpected(u, "no announcement from the head of a cluster path"))?);
                }
                for inc in &node.r {
                    for bits in mask.chunks(chunk) {
                        net.send(u, inc.edge, Payload::Heads { bits: bits.to_vec() })?;
                    }
                }
            }
            rounds.heads = net.drain(|_, env| {
                let Payload::Heads { bits } = env.payload else {
                    return Err(unexpected(env.to, "head masks"));
                };
                nodes[env.to as usize].masks.entry(env.from).or_default().extend(bits);
                Ok(())
            })?;
        }

        // (e) clusters, light edges and the remaining-edge status
        let mut tree_edges = EdgeSet::empty(g.m());
        let mut le_edges = EdgeSet::empty(g.m());
        let mut added: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        let mut heaviest: Vec<Option<EdgeKey>> = vec![None; n];
        let mut next_q: Vec<Option<Vec<Path>>> = vec![None; n];
        for v in 0..n {
            let Some(fan) = fans[v].as_mut() else { continue };
            let node = &nodes[v];
            let mut sampled = known[v].clone();
            for (u, paths) in &node.received {
                let mask = node.masks.get(u).map_or(&[][..], |m| &m[..]);
                if phase < cfg.k && mask.len() != paths.len() {
                    return Err(unexpected(v as VertexId, "head mask length differs from the sample"));
                }
                for (path, &bit) in paths.iter().zip(mask) {
                    sampled.insert(path.head(), bit);
                }
            }
            if phase < cfg.k && fan.heads().any(|h| !sampled.contains_key(&h)) {
                return Err(unexpected(v as VertexId, "status of a candidate head is unknown"));
            }
            let q = select_clusters(fan, quota, true, |h| sampled.get(&h).copied().unwrap_or(false));
            let le = light_edges(fan, &node.r, &mut marks);
            let mut mine = le.clone();
            for &e in &le {
                le_edges.insert(e);
            }
            if let Some(q) = &q {
                for path in q {
                    for &e in path.edges() {
                        tree_edges.insert(e);
                    }
                    mine.extend(path.last_edge());
                }
                heaviest[v] = q.iter().filter_map(|p| p.last_key(g)).max();
            }
            mine.sort_unstable();
            mine.dedup();
            for &e in &mine {
                spanner.insert(e);
            }
            added[v] = mine;
            next_q[v] = q;
        }

        for v in g.vertices() {
            let node = &nodes[v as usize];
            let clustered = next_q[v as usize].is_some();
            let h = heaviest[v as usize];
            for inc in &node.r {
                let mine = added[v as usize].binary_search(&inc.edge).is_ok();
                net.send(v, inc.edge, Payload::Status { clustered, added: mine, heavy: h.is_some() })?;
                if let Some(key) = h {
                    net.send(v, inc.edge, Payload::StatusWeight { weight: key.w })?;
                    net.send(v, inc.edge, Payload::StatusKey { id: key.id })?;
                }
            }
        }
        rounds.status = net.drain(|_, env| {
            let peer = nodes[env.to as usize].peers.entry(env.edge).or_default();
            match env.payload {
                Payload::Status { clustered, added, heavy } => {
                    peer.clustered = clustered;
                    peer.added = added;
                    peer.heavy = heavy;
                }
                Payload::StatusWeight { weight } => peer.weight = Some(weight),
                Payload::StatusKey { id } => peer.id = Some(id),
                _ => return Err(unexpected(env.to, "status exchange")),
            }
            Ok(())
        })?;

        let mut remaining = 0;
        for v in g.vertices() {
            let vi = v as usize;
            let clustered = next_q[vi].is_some();
            let own = heaviest[vi];
            let node = &mut nodes[vi];
            let mut keep = Vec::new();
            for inc in &node.r {
                let peer = node.peers.get(&inc.edge).copied().unwrap_or_default();
                let their = match (peer.heavy, peer.weight, peer.id) {
                    (true, Some(w), Some(id)) => Some(EdgeKey { w, id }),
                    (false, None, None) => None,
                    _ => return Err(unexpected(v, "partial status from a neighbour")),
                };
                let key = g.edge(inc.edge).key();
                let mine = added[vi].binary_search(&inc.edge).is_ok();
                if clustered
                    && peer.clustered
                    && !mine
                    && !peer.added
                    && own.is_none_or(|h| key > h)
                    && their.is_none_or(|h| key > h)
                {
                    keep.push(*inc);
                    if g.edge(inc.edge).u == v {
                        remaining += 1;
                    }
                }
            }
            node.r = keep;
            node.clustered = clustered;
            node.q = next_q[vi].take().unwrap_or_default();
        }

        // new tree links, registered with the parent
        if phase < cfg.k {
            for v in g.vertices() {
                for path in &nodes[v as usize].q {
                    if let Some(e) = path.last_edge() {
                        net.send(v, e, Payload::Register { center: path.head() })?;
                    }
                }
            }
            rounds.register = net.drain(|_, env| {
                let Payload::Register { center } = env.payload else {
                    return Err(unexpected(env.to, "registration"));
                };
                let list = nodes[env.to as usize].children.entry(center).or_default();
                if !list.contains(&(env.from, env.edge)) {
                    list.push((env.from, env.edge));
                }
                Ok(())
            })?;
        }

        let cutoffs: Vec<usize> = fans.iter().flatten().map(|f| f.cutoff).collect();
        traces.push(PhaseTrace {
            phase,
            centers: nodes.iter().filter(|x| x.center).count(),
            clustered: nodes.iter().filter(|x| x.clustered).count(),
            new_edges: spanner.len() - before,
            tree_edges: tree_edges.len(),
            le_edges: le_edges.len(),
            remaining,
            max_cutoff: cutoffs.iter().copied().max().unwrap_or(0),
            mean_cutoff: if cutoffs.is_empty() {
                0.0
            } else {
                cutoffs.iter().sum::<usize>() as f64 / cutoffs.len() as f64
            },
            wall_ms: None,
        });
        stages.push(rounds);
    }

    let edges = spanner.to_vec();
    let result = SpannerResult {
        algo: Algo::Distributed,
        params: BuildParams {
            f: cfg.f,
            k: cfg.k,
            seed: Some(cfg.seed),
            variant: Variant::Sequential,
            mis: MisMode::Scan,
            c_k: cfg.c_k,
            c_s: cfg.c_s,
            cluster_quota: quota,
            samples_per_vertex: draws,
            sample_probability: p,
            hitting_constant: None,
        },
        graph: GraphSummary::from(g),
        size_bound: general_size_bound(n, cfg.f, cfg.k, 8.0, edges.len()),
        edges,
        phases: traces,
        warmup: None,
    };
    let rounds_per_phase: Vec<u64> = stages.iter().map(StageRounds::total).collect();
    let report = RoundReport {
        bandwidth: net.bandwidth,
        encoding: net.encoding,
        total_rounds: net.round(),
        rounds_per_phase,
        stages,
        max_bits: net.max_bits(),
        messages: net.messages(),
    };
    debug_assert_eq!(report.total_rounds, report.rounds_per_phase.iter().sum::<u64>());
    Ok(Simulation { result, report, log: net.take_log() })
}

fn unexpected(vertex: VertexId, detail: &str) -> SimError {
    SimError::Protocol { vertex, detail: detail.to_string() }
}

fn budget(phase: usize, stage: &'static str, rounds: u64, budget: u64) -> Result<(), SimError> {
    if rounds > budget {
        return Err(SimError::RoundBudget { phase, stage, rounds, budget });
    }
    Ok(())
}
