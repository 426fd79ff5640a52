//! Deterministic graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Graph, VertexId, Weight};
use crate::rng::{global, Purpose};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSpec {
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    Grid { rows: usize, cols: usize },
    Complete { n: usize },
    Tree { n: usize },
    Cycle { n: usize },
    Star { n: usize },
    Path { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightSpec {
    #[default]
    Unit,
    Uniform {
        lo: Weight,
        hi: Weight,
    },
}

impl GraphSpec {
    pub fn n(&self) -> usize {
        match *self {
            GraphSpec::Gnp { n, .. }
            | GraphSpec::RandomRegular { n, .. }
            | GraphSpec::Complete { n }
            | GraphSpec::Tree { n }
            | GraphSpec::Cycle { n }
            | GraphSpec::Star { n }
            | GraphSpec::Path { n } => n,
            GraphSpec::Grid { rows, cols } => rows * cols,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            GraphSpec::Gnp { n, p } => format!("gnp({n},{p})"),
            GraphSpec::RandomRegular { n, d } => format!("random-regular({n},{d})"),
            GraphSpec::Grid { rows, cols } => format!("grid({rows}x{cols})"),
            GraphSpec::Complete { n } => format!("K_{n}"),
            GraphSpec::Tree { n } => format!("tree({n})"),
            GraphSpec::Cycle { n } => format!("C_{n}"),
            GraphSpec::Star { n } => format!("star({n})"),
            GraphSpec::Path { n } => format!("path({n})"),
        }
    }
}

pub fn generate(spec: &GraphSpec, weights: WeightSpec, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = global(seed, Purpose::Auxiliary);
    let pairs = topology(spec, &mut rng)?;
    if let WeightSpec::Uniform { lo, hi } = weights {
        if lo == 0 || lo > hi {
            return Err(GraphError::InfeasibleParams(format!("weight range [{lo}, {hi}]")));
        }
    }
    let triples: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| {
            let w = match weights {
                WeightSpec::Unit => 1,
                WeightSpec::Uniform { lo, hi } => rng.gen_range(lo..=hi),
            };
            (u, v, w)
        })
        .collect();
    Graph::from_edges(spec.n(), &triples)
}

fn infeasible(msg: impl Into<String>) -> GraphError {
    GraphError::InfeasibleParams(msg.into())
}

fn topology(spec: &GraphSpec, rng: &mut ChaCha8Rng) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
    let v = |x: usize| x as VertexId;
    let pairs = match *spec {
        GraphSpec::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(infeasible(format!("gnp probability {p} outside [0, 1]")));
            }
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        out.push((v(a), v(b)));
                    }
                }
            }
            out
        }
        GraphSpec::RandomRegular { n, d } => random_regular(n, d, rng)?,
        GraphSpec::Grid { rows, cols } => {
            let mut out = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let x = r * cols + c;
                    if c + 1 < cols {
                        out.push((v(x), v(x + 1)));
                    }
                    if r + 1 < rows {
                        out.push((v(x), v(x + cols)));
                    }
                }
            }
            out
        }
        GraphSpec::Complete { n } => (0..n).flat_map(|a| (a + 1..n).map(move |b| (v(a), v(b)))).collect(),
        GraphSpec::Tree { n } => {
            let mut labels: Vec<VertexId> = (0..n).map(v).collect();
            labels.shuffle(rng);
            (1..n).map(|x| (labels[rng.gen_range(0..x)], labels[x])).collect()
        }
        GraphSpec::Cycle { n } => {
            if n < 3 {
                return Err(infeasible("a cycle needs at least 3 vertices"));
            }
            (0..n).map(|x| (v(x), v((x + 1) % n))).collect()
        }
        GraphSpec::Star { n } => (1..n).map(|x| (0, v(x))).collect(),
        GraphSpec::Path { n } => (1..n).map(|x| (v(x - 1), v(x))).collect(),
    };
    Ok(pairs)
}

/// Pairing model with incremental rejection of loops and repeated pairs;
/// restarts when the remaining stubs cannot be matched.
fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
    if d >= n.max(1) || (n * d) % 2 == 1 {
        return Err(infeasible(format!("no simple {d}-regular graph on {n} vertices")));
    }
    'restart: for _ in 0..1000 {
        let mut stubs: Vec<VertexId> = (0..n).flat_map(|x| std::iter::repeat_n(x as VertexId, d)).collect();
        let mut chosen = HashSet::with_capacity(n * d / 2);
        let mut out = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let mut picked = None;
            for _ in 0..64 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (a, b) = (stubs[i], stubs[j]);
                if a != b && !chosen.contains(&(a.min(b), a.max(b))) {
                    picked = Some((i, j));
                    break;
                }
            }
            if picked.is_none() {
                let mut candidates = Vec::new();
                for i in 0..stubs.len() {
                    for j in i + 1..stubs.len() {
                        let (a, b) = (stubs[i], stubs[j]);
                        if a != b && !chosen.contains(&(a.min(b), a.max(b))) {
                            candidates.push((i, j));
                        }
                    }
                }
                match candidates.choose(rng) {
                    Some(&pair) => picked = Some(pair),
                    None => continue 'restart,
                }
            }
            let (i, j) = picked.expect("pair chosen above");
            let (a, b) = (stubs[i], stubs[j]);
            chosen.insert((a.min(b), a.max(b)));
            out.push((a.min(b), a.max(b)));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
        }
        return Ok(out);
    }
    Err(infeasible("random-regular pairing did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_edge_count() {
        let g = generate(&GraphSpec::Complete { n: 5 }, WeightSpec::Unit, 0).unwrap();
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn cycle_is_two_regular() {
        let g = generate(&GraphSpec::Cycle { n: 6 }, WeightSpec::Unit, 0).unwrap();
        assert_eq!(g.m(), 6);
        assert!(g.vertices().all(|x| g.degree(x) == 2));
    }

    #[test]
    fn gnp_is_deterministic_per_seed() {
        let spec = GraphSpec::Gnp { n: 30, p: 0.3 };
        let a = generate(&spec, WeightSpec::Uniform { lo: 1, hi: 9 }, 1).unwrap();
        let b = generate(&spec, WeightSpec::Uniform { lo: 1, hi: 9 }, 1).unwrap();
        let c = generate(&spec, WeightSpec::Uniform { lo: 1, hi: 9 }, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_regular_degrees() {
        let g = generate(&GraphSpec::RandomRegular { n: 30, d: 6 }, WeightSpec::Unit, 3).unwrap();
        assert!(g.vertices().all(|x| g.degree(x) == 6));
        assert_eq!(g.m(), 90);
    }

    #[test]
    fn random_regular_rejects_odd_total_degree() {
        let err = generate(&GraphSpec::RandomRegular { n: 7, d: 3 }, WeightSpec::Unit, 0).unwrap_err();
        assert!(matches!(err, GraphError::InfeasibleParams(_)));
        assert!(generate(&GraphSpec::RandomRegular { n: 4, d: 4 }, WeightSpec::Unit, 0).is_err());
    }

    #[test]
    fn tree_and_grid_shapes() {
        let t = generate(&GraphSpec::Tree { n: 30 }, WeightSpec::Unit, 9).unwrap();
        assert_eq!(t.m(), 29);
        let labels = crate::shortest::components(&t, None, &[false; 30]);
        assert!(labels.iter().all(|&l| l == 0));
        let g = generate(&GraphSpec::Grid { rows: 6, cols: 6 }, WeightSpec::Unit, 0).unwrap();
        assert_eq!(g.m(), 60);
    }

    #[test]
    fn bad_params() {
        assert!(generate(&GraphSpec::Gnp { n: 4, p: 1.5 }, WeightSpec::Unit, 0).is_err());
        assert!(generate(&GraphSpec::Cycle { n: 2 }, WeightSpec::Unit, 0).is_err());
        assert!(generate(&GraphSpec::Path { n: 3 }, WeightSpec::Uniform { lo: 5, hi: 1 }, 0).is_err());
    }
}
