//! Structural checks of a clustering state. Failures are returned as data.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, VertexId};
use crate::meta::PhaseState;
use crate::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    /// A path is malformed, does not end at its owner, or starts outside `Z_i`.
    PathShape,
    /// `T_i(s)` is a tree of depth at most `i` rooted at `s`.
    Tree,
    /// Cluster paths of a vertex share only their tail.
    Disjoint,
    /// Weights increase toward the tail.
    Monotone,
    /// Clustered vertices hold exactly `K_f` paths, others none.
    ClusterCount,
    Continuity,
    PrefixClosure,
    /// Fan paths are disjoint, start at distinct previous centers and are ordered.
    Fan,
    /// A shortcut path ends with the lightest remaining edge available to it.
    Shortcut,
    /// No edge lies on more than two trees.
    TwoTrees,
    /// Bookkeeping of the spanner and remaining sets.
    EdgeSets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub invariant: Invariant,
    pub phase: usize,
    pub vertex: Option<VertexId>,
    pub detail: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phase {} {:?}", self.phase, self.invariant)?;
        if let Some(v) = self.vertex {
            write!(f, " at {v}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

struct Report<'a> {
    phase: usize,
    out: &'a mut Vec<Diagnostic>,
}

impl Report<'_> {
    fn push(&mut self, invariant: Invariant, vertex: Option<VertexId>, detail: impl Into<String>) {
        self.out.push(Diagnostic { invariant, phase: self.phase, vertex, detail: detail.into() });
    }
}

/// Checks `state` on its own and, when given, against the state of the
/// previous phase. Invariant I is not checked here; see [`center_ratio`].
pub fn check_invariants(g: &Graph, prev: Option<&PhaseState>, state: &PhaseState, quota: usize) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut rep = Report { phase: state.phase, out: &mut out };
    let i = state.phase;

    for v in g.vertices() {
        let q = &state.clusters[v as usize];
        let expected = match (i, state.clustered[v as usize]) {
            (0, _) => 1,
            (_, true) => quota,
            (_, false) => 0,
        };
        if q.len() != expected {
            rep.push(Invariant::ClusterCount, Some(v), format!("{} paths, expected {expected}", q.len()));
        }
        for p in q {
            if !p.is_valid_in(g) || p.tail() != v {
                rep.push(Invariant::PathShape, Some(v), format!("bad path {:?}", p.vertices()));
            } else if !state.centers[p.head() as usize] {
                rep.push(Invariant::PathShape, Some(v), format!("head {} is not a center", p.head()));
            }
            if p.hops() > i {
                rep.push(Invariant::Tree, Some(v), format!("path of {} hops in phase {i}", p.hops()));
            }
            if !p.is_monotone(g) {
                rep.push(Invariant::Monotone, Some(v), format!("path {:?}", p.vertices()));
            }
        }
        if let Some((a, b)) = first_overlap(q, v) {
            rep.push(Invariant::Disjoint, Some(v), format!("paths {a} and {b} share a vertex"));
        }
        let heads: HashSet<VertexId> = q.iter().map(Path::head).collect();
        if heads.len() != q.len() {
            rep.push(Invariant::Disjoint, Some(v), "repeated cluster center");
        }
        if state.clustered[v as usize] {
            for p in q {
                for &u in &p.vertices()[..p.vertices().len().saturating_sub(1)] {
                    if !state.clustered[u as usize] {
                        continue;
                    }
                    let prefix = p.prefix_to(u).expect("u lies on p");
                    if !state.clusters[u as usize].contains(&prefix) {
                        rep.push(Invariant::PrefixClosure, Some(v), format!("prefix to {u} missing from Q({u})"));
                    }
                    if let Some(prev) = prev {
                        if !prev.clusters[u as usize].contains(&prefix) {
                            rep.push(
                                Invariant::PrefixClosure,
                                Some(v),
                                format!("prefix to {u} missing from previous Q({u})"),
                            );
                        }
                    }
                }
            }
        }
    }

    check_trees(g, state, &mut rep);

    if let Some(prev) = prev {
        for v in g.vertices().filter(|&v| state.clustered[v as usize]) {
            if !prev.clustered[v as usize] {
                rep.push(Invariant::Continuity, Some(v), "clustered now but not before");
                continue;
            }
            for p in &prev.clusters[v as usize] {
                if state.centers[p.head() as usize] && !state.clusters[v as usize].contains(p) {
                    rep.push(
                        Invariant::Continuity,
                        Some(v),
                        format!("path from surviving center {} dropped", p.head()),
                    );
                }
            }
        }
        for s in g.vertices().filter(|&s| state.centers[s as usize] && !prev.centers[s as usize]) {
            rep.push(Invariant::PathShape, Some(s), "center not drawn from the previous centers");
        }
        check_fans(g, prev, state, &mut rep);
        check_edge_sets(g, prev, state, &mut rep);
    }
    out
}

fn first_overlap(paths: &[Path], owner: VertexId) -> Option<(usize, usize)> {
    let mut seen: HashMap<VertexId, usize> = HashMap::new();
    for (j, p) in paths.iter().enumerate() {
        for &x in p.vertices() {
            if x == owner {
                continue;
            }
            if let Some(&other) = seen.get(&x) {
                if other != j {
                    return Some((other, j));
                }
            }
            seen.insert(x, j);
        }
    }
    None
}

fn check_trees(g: &Graph, state: &PhaseState, rep: &mut Report) {
    // parent[(s, x)] = (parent vertex, edge)
    let mut parent: HashMap<(VertexId, VertexId), (VertexId, EdgeId)> = HashMap::new();
    let mut trees_per_edge: BTreeMap<EdgeId, HashSet<VertexId>> = BTreeMap::new();
    for (v, q) in state.clusters.iter().enumerate() {
        for p in q {
            let s = p.head();
            if p.vertices()[1..].contains(&s) {
                rep.push(Invariant::Tree, Some(v as VertexId), format!("root {s} is not the top of its tree"));
            }
            for (j, &e) in p.edges().iter().enumerate() {
                let x = p.vertices()[j + 1];
                let link = (p.vertices()[j], e);
                if let Some(&old) = parent.get(&(s, x)) {
                    if old != link {
                        rep.push(
                            Invariant::Tree,
                            Some(x),
                            format!("two parents in tree of {s}: {} and {}", old.0, link.0),
                        );
                    }
                } else {
                    parent.insert((s, x), link);
                }
                trees_per_edge.entry(e).or_default().insert(s);
            }
        }
    }
    for (e, trees) in trees_per_edge {
        if trees.len() > 2 {
            let edge = g.edge(e);
            rep.push(Invariant::TwoTrees, None, format!("edge {}-{} lies on {} trees", edge.u, edge.v, trees.len()));
        }
    }
}

fn check_fans(g: &Graph, prev: &PhaseState, state: &PhaseState, rep: &mut Report) {
    for (v, fan) in state.fans.iter().enumerate() {
        let Some(fan) = fan else { continue };
        let v = v as VertexId;
        if !prev.clustered[v as usize] {
            rep.push(Invariant::Fan, Some(v), "fan built for a vertex that was not clustered");
        }
        if fan.working[..fan.inherited] != prev.clusters[v as usize][..] {
            rep.push(Invariant::Fan, Some(v), "fan does not start from the previous cluster paths");
        }
        for p in fan.working.iter().chain(&fan.shortcut) {
            if !p.is_valid_in(g) || p.tail() != v {
                rep.push(Invariant::Fan, Some(v), format!("bad fan path {:?}", p.vertices()));
            } else if !prev.centers[p.head() as usize] {
                rep.push(Invariant::Fan, Some(v), format!("fan path starts at non-center {}", p.head()));
            }
        }
        for set in [&fan.working, &fan.shortcut] {
            if let Some((a, b)) = first_overlap(set, v) {
                rep.push(Invariant::Fan, Some(v), format!("fan paths {a} and {b} intersect"));
            }
        }
        let keys: Vec<_> = fan.shortcut.iter().map(|p| p.last_key(g)).collect();
        if keys.windows(2).any(|w| w[0] >= w[1]) {
            rep.push(Invariant::Fan, Some(v), "shortcut paths not strictly ordered by last edge");
        }
        let mut origins = fan.origin.clone();
        origins.sort_unstable();
        if origins != (0..fan.working.len()).collect::<Vec<_>>() {
            rep.push(Invariant::Fan, Some(v), "shortcut origin is not a bijection");
        }
        for (j, p) in fan.shortcut.iter().enumerate() {
            let Some(&o) = fan.origin.get(j) else { break };
            let original = &fan.working[o];
            if o < fan.inherited {
                if p != original {
                    rep.push(Invariant::Shortcut, Some(v), "inherited path was modified");
                }
                continue;
            }
            let Some(last) = p.last_key(g) else {
                rep.push(Invariant::Shortcut, Some(v), "new path without an edge");
                continue;
            };
            let within = p.vertices()[..p.vertices().len() - 1] == original.vertices()[..p.vertices().len() - 1];
            if !within {
                rep.push(Invariant::Shortcut, Some(v), "shortcut path is not a prefix of its original");
            }
            for inc in g.incident(v) {
                if prev.remaining.contains(inc.edge)
                    && original.vertices()[..original.vertices().len() - 1].contains(&inc.neighbor)
                    && g.edge(inc.edge).key() < last
                {
                    rep.push(
                        Invariant::Shortcut,
                        Some(v),
                        format!("lighter entry edge from {} was available", inc.neighbor),
                    );
                }
            }
        }
        let expected_cutoff = if state.clustered[v as usize] {
            let last = state.clusters[v as usize].last().and_then(|q| fan.shortcut.iter().position(|p| p == q));
            last.map(|j| j + 1)
        } else {
            Some(fan.shortcut.len() + 1)
        };
        if expected_cutoff != Some(fan.cutoff) {
            rep.push(Invariant::Fan, Some(v), format!("cutoff {} inconsistent with the selection", fan.cutoff));
        }
    }
}

fn check_edge_sets(g: &Graph, prev: &PhaseState, state: &PhaseState, rep: &mut Report) {
    if !prev.spanner.is_subset(&state.spanner) {
        rep.push(Invariant::EdgeSets, None, "spanner shrank");
    }
    if !state.remaining.is_subset(&prev.remaining) {
        rep.push(Invariant::EdgeSets, None, "remaining set grew");
    }
    for e in state.remaining.iter() {
        let edge = g.edge(e);
        if !state.clustered[edge.u as usize] || !state.clustered[edge.v as usize] {
            rep.push(
                Invariant::EdgeSets,
                None,
                format!("remaining edge {}-{} leaves the clustered set", edge.u, edge.v),
            );
        }
        if state.spanner.contains(e) {
            rep.push(Invariant::EdgeSets, None, format!("remaining edge {}-{} already in the spanner", edge.u, edge.v));
        }
    }
    for q in &state.clusters {
        for p in q {
            if p.edges().iter().any(|&e| !state.spanner.contains(e)) {
                rep.push(Invariant::EdgeSets, Some(p.tail()), "tree edge missing from the spanner");
            }
        }
    }
}

/// `|Z_i| / (f^(i/k) n^(1 - i/k))`, the measured slack of the center-count bound.
pub fn center_ratio(state: &PhaseState, n: usize, f: usize, k: usize) -> f64 {
    let i = state.phase as f64 / k as f64;
    let expected = (f as f64).powf(i) * (n as f64).powf(1.0 - i);
    state.centers.iter().filter(|&&c| c).count() as f64 / expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphSpec, WeightSpec};
    use crate::meta::{build_ft_spanner_detailed, MetaConfig};

    fn states(seed: u64) -> (Graph, Vec<PhaseState>, usize) {
        let g = generate(&GraphSpec::Gnp { n: 70, p: 0.35 }, WeightSpec::Uniform { lo: 1, hi: 30 }, seed).unwrap();
        let mut cfg = MetaConfig::new(1, 3, seed);
        cfg.c_k = 1;
        cfg.record_states = true;
        let out = build_ft_spanner_detailed(&g, &cfg).unwrap();
        (g, out.states, cfg.quota())
    }

    #[test]
    fn initial_state_is_clean() {
        let (g, st, quota) = states(1);
        assert!(check_invariants(&g, None, &st[0], quota).is_empty());
    }

    #[test]
    fn every_phase_is_clean() {
        for seed in 0..4 {
            let (g, st, quota) = states(seed);
            assert_eq!(st.len(), 4);
            for w in st.windows(2) {
                let d = check_invariants(&g, Some(&w[0]), &w[1], quota);
                assert!(d.is_empty(), "{}", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n"));
            }
        }
    }

    #[test]
    fn injected_overlap_is_reported() {
        let (g, st, quota) = states(2);
        let mut bad = st[1].clone();
        let v = (0..g.n()).find(|&v| bad.clusters[v].len() >= 2).expect("some vertex has two clusters");
        // copy one path over another: the two now share every vertex
        bad.clusters[v][1] = bad.clusters[v][0].clone();
        let d = check_invariants(&g, Some(&st[0]), &bad, quota);
        assert!(d.iter().any(|x| x.invariant == Invariant::Disjoint));
    }
}
