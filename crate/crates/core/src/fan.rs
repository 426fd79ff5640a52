//! Per-vertex work of one phase: the disjoint path fan, shortcutting, cluster
//! selection and the light edges. Everything here reads only what a vertex
//! would know locally, so the simulated distributed build calls the same code.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, Incidence, VertexId};
use crate::mis::{parallel_greedy_mis, permutation_from, PathConflictInstance};
use crate::path::Path;
use crate::result::{MisMode, Variant};
use crate::rng::{stream, Purpose};

/// How Step 1 walks the candidate paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    /// Neighbour edges in key order, first fitting sample of each.
    PerEdge,
    /// All candidates flattened in (edge key, sample index) order.
    Fixed,
    /// All candidates in a random order drawn from `(seed, owner, phase)`.
    Permuted { seed: u64, phase: u32 },
}

impl ScanOrder {
    pub fn for_variant(variant: Variant, mis: MisMode, seed: u64, phase: u32) -> Self {
        match (variant, mis) {
            (Variant::Sequential, _) => ScanOrder::PerEdge,
            (Variant::Modified, MisMode::Scan) => ScanOrder::Fixed,
            (Variant::Modified, MisMode::Parallel) => ScanOrder::Permuted { seed, phase },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFan {
    pub owner: VertexId,
    /// `P_{i-1}(v)`: the inherited cluster paths, then accepted paths in acceptance order.
    pub working: Vec<Path>,
    /// How many leading entries of `working` were inherited.
    pub inherited: usize,
    /// `P*_{i-1}(v)` ascending by last-edge key; a trivial path comes first.
    pub shortcut: Vec<Path>,
    /// `origin[j]` indexes `Shortcut^{-1}(shortcut[j])` in `working`.
    pub origin: Vec<usize>,
    /// 1-based index of the last selected path, or `shortcut.len() + 1`.
    pub cutoff: usize,
}

impl PathFan {
    pub fn heads(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.shortcut.iter().map(Path::head)
    }
}

/// Generation-stamped vertex labels, cleared in O(1).
#[derive(Debug, Clone)]
pub struct Marks {
    stamp: Vec<u32>,
    value: Vec<u32>,
    generation: u32,
}

impl Marks {
    pub fn new(n: usize) -> Self {
        Marks { stamp: vec![0; n], value: vec![0; n], generation: 1 }
    }

    pub fn clear(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
    }

    #[inline]
    pub fn set(&mut self, v: VertexId, value: u32) {
        self.stamp[v as usize] = self.generation;
        self.value[v as usize] = value;
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> Option<u32> {
        (self.stamp[v as usize] == self.generation).then(|| self.value[v as usize])
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.stamp[v as usize] == self.generation
    }
}

/// Indices into `Q_{i-1}(u)` of the sampled paths `S_{i-1}(u)`, duplicates dropped,
/// first occurrence order kept.
pub fn sample_indices(seed: u64, u: VertexId, phase: u32, available: usize, draws: usize) -> Vec<usize> {
    if available == 0 {
        return Vec::new();
    }
    let mut rng = stream(seed, u, phase, Purpose::Sample);
    let mut seen = vec![false; available];
    let mut out = Vec::new();
    for _ in 0..draws {
        let j = rng.gen_range(0..available);
        if !std::mem::replace(&mut seen[j], true) {
            out.push(j);
        }
    }
    out
}

/// Step 1 and the shortcut cleanup for `owner`.
///
/// `r_edges` are the owner's remaining incident edges ascending by key and
/// `samples(u)` yields the sampled cluster paths of neighbour `u`, each ending at `u`.
pub fn build_fan<'a, S>(
    g: &Graph,
    owner: VertexId,
    own: &[Path],
    r_edges: &[Incidence],
    samples: S,
    order: ScanOrder,
    marks: &mut Marks,
) -> PathFan
where
    S: Fn(VertexId) -> &'a [Path],
{
    marks.clear();
    marks.set(owner, 0);
    for p in own {
        for &x in p.vertices() {
            marks.set(x, 0);
        }
    }
    let mut working: Vec<Path> = own.to_vec();
    let inherited = working.len();

    let disjoint = |p: &Path, marks: &Marks| p.vertices().iter().all(|&x| !marks.contains(x));
    match order {
        ScanOrder::PerEdge => {
            for inc in r_edges {
                if let Some(p) = samples(inc.neighbor).iter().find(|p| disjoint(p, marks)) {
                    for &x in p.vertices() {
                        marks.set(x, 0);
                    }
                    working.push(p.extend(owner, inc.edge));
                }
            }
        }
        ScanOrder::Fixed => {
            let candidates = r_edges.iter().flat_map(|inc| samples(inc.neighbor).iter().map(move |p| (p, inc.edge)));
            for (p, edge) in candidates {
                if disjoint(p, marks) {
                    for &x in p.vertices() {
                        marks.set(x, 0);
                    }
                    working.push(p.extend(owner, edge));
                }
            }
        }
        ScanOrder::Permuted { seed, phase } => {
            let candidates: Vec<(&Path, EdgeId)> = r_edges
                .iter()
                .flat_map(|inc| samples(inc.neighbor).iter().map(move |p| (p, inc.edge)))
                .filter(|(p, _)| disjoint(p, marks))
                .collect();
            let mut rng = stream(seed, owner, phase, Purpose::Permutation);
            let rank = permutation_from(candidates.len(), &mut rng);
            let inst = PathConflictInstance::new(candidates.iter().map(|(p, _)| p.vertices().to_vec()).collect(), rank);
            let (mut accepted, _) = parallel_greedy_mis(&inst);
            accepted.sort_by_key(|&j| inst.rank[j]);
            for j in accepted {
                let (p, edge) = candidates[j];
                working.push(p.extend(owner, edge));
            }
        }
    }

    // Shortcut each new path through its lightest remaining edge into the owner.
    marks.clear();
    for (j, p) in working.iter().enumerate().skip(inherited) {
        for &x in &p.vertices()[..p.vertices().len() - 1] {
            marks.set(x, j as u32);
        }
    }
    let mut cut: Vec<Option<(VertexId, EdgeId)>> = vec![None; working.len()];
    for inc in r_edges {
        if let Some(j) = marks.get(inc.neighbor) {
            cut[j as usize].get_or_insert((inc.neighbor, inc.edge));
        }
    }
    let mut starred: Vec<(Path, usize)> = working
        .iter()
        .enumerate()
        .map(|(j, p)| match cut[j] {
            Some((x, e)) if j >= inherited => {
                (p.prefix_to(x).expect("shortcut vertex lies on the path").extend(owner, e), j)
            }
            _ => (p.clone(), j),
        })
        .collect();
    starred.sort_by_key(|(p, _)| p.last_key(g));
    let (shortcut, origin) = starred.into_iter().unzip();
    PathFan { owner, working, inherited, shortcut, origin, cutoff: 0 }
}

/// Step 2 for one vertex: the first `quota` paths whose head passes `sampled`.
/// Sets `fan.cutoff` and returns the selection when the quota is met.
pub fn select_clusters(
    fan: &mut PathFan,
    quota: usize,
    eligible: bool,
    sampled: impl Fn(VertexId) -> bool,
) -> Option<Vec<Path>> {
    let mut picked = Vec::with_capacity(quota);
    let mut last = 0;
    if eligible && quota > 0 {
        for (j, p) in fan.shortcut.iter().enumerate() {
            if sampled(p.head()) {
                picked.push(p.clone());
                last = j + 1;
                if picked.len() == quota {
                    break;
                }
            }
        }
    }
    if eligible && quota > 0 && picked.len() == quota {
        fan.cutoff = last;
        Some(picked)
    } else {
        fan.cutoff = fan.shortcut.len() + 1;
        None
    }
}

/// `LE_i(v)`: remaining edges from the owner into the original paths ranked
/// strictly before the cutoff.
pub fn light_edges(fan: &PathFan, r_edges: &[Incidence], marks: &mut Marks) -> Vec<EdgeId> {
    marks.clear();
    for &j in &fan.origin[..fan.cutoff.saturating_sub(1)] {
        for &x in fan.working[j].vertices() {
            marks.set(x, 0);
        }
    }
    r_edges.iter().filter(|inc| inc.neighbor != fan.owner && marks.contains(inc.neighbor)).map(|inc| inc.edge).collect()
}
