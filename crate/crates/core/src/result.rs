use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, EdgeSet, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Warmup,
    Meta,
    MetaDet,
    Distributed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Scan neighbour edges in weight order, taking at most one path each.
    #[default]
    Sequential,
    /// Scan all sampled paths in one fixed order.
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MisMode {
    /// Ascending (neighbour edge key, sample index).
    #[default]
    Scan,
    /// Seeded random order, solved with the round-based greedy MIS.
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    pub f: usize,
    pub k: usize,
    pub seed: Option<u64>,
    pub variant: Variant,
    pub mis: MisMode,
    pub c_k: usize,
    pub c_s: usize,
    /// Number of clusters each clustered vertex joins (`c_k * k * f`, or `4f` for the warm-up).
    pub cluster_quota: usize,
    pub samples_per_vertex: usize,
    pub sample_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hitting_constant: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
}

impl From<&Graph> for GraphSummary {
    fn from(g: &Graph) -> Self {
        GraphSummary { n: g.n(), m: g.m() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTrace {
    pub phase: usize,
    pub centers: usize,
    pub clustered: usize,
    pub new_edges: usize,
    pub tree_edges: usize,
    pub le_edges: usize,
    pub remaining: usize,
    /// Largest cutoff index over the vertices processed in this phase.
    pub max_cutoff: usize,
    pub mean_cutoff: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarmupTrace {
    pub centers: usize,
    pub unclustered: usize,
    pub first_step_edges: usize,
    pub scan_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeBound {
    pub formula: String,
    pub constant: f64,
    pub bound: f64,
    pub edges: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpannerResult {
    pub algo: Algo,
    pub params: BuildParams,
    pub graph: GraphSummary,
    pub edges: Vec<EdgeId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<PhaseTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<WarmupTrace>,
    pub size_bound: SizeBound,
}

impl SpannerResult {
    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet::from_ids(self.graph.m, self.edges.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Drops wall-clock fields so two runs can be compared byte for byte.
    pub fn without_timings(mut self) -> Self {
        for p in &mut self.phases {
            p.wall_ms = None;
        }
        if let Some(w) = &mut self.warmup {
            w.wall_ms = None;
        }
        self
    }
}

#[inline]
pub fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// `ceil(log2 n)`, at least 1.
pub fn ceil_log2(n: usize) -> usize {
    let mut bits = 0;
    while (1usize << bits) < n {
        bits += 1;
    }
    bits.max(1)
}

/// `c * (k^3 log n f^(1-1/k) n^(1+1/k) + k^2 f n)`.
pub fn general_size_bound(n: usize, f: usize, k: usize, c: f64, edges: usize) -> SizeBound {
    let (nf, ff, kf) = (n as f64, f as f64, k as f64);
    let inv = 1.0 / kf;
    let bound = c * (kf.powi(3) * log2(n) * ff.powf(1.0 - inv) * nf.powf(1.0 + inv) + kf * kf * ff * nf);
    make_bound("c*(k^3*log2(n)*f^(1-1/k)*n^(1+1/k) + k^2*f*n)", c, bound, edges)
}

/// `c * (f n + sqrt(f) n^(3/2) log n)`.
pub fn warmup_size_bound(n: usize, f: usize, c: f64, edges: usize) -> SizeBound {
    let (nf, ff) = (n as f64, f as f64);
    let bound = c * (ff * nf + ff.sqrt() * nf.powf(1.5) * log2(n));
    make_bound("c*(f*n + sqrt(f)*n^(3/2)*log2(n))", c, bound, edges)
}

/// `c * lambda * n * log^2 n`.
pub fn certificate_size_bound(n: usize, lambda: usize, c: f64, edges: usize) -> SizeBound {
    let bound = c * lambda as f64 * n as f64 * log2(n).powi(2);
    make_bound("c*lambda*n*log2(n)^2", c, bound, edges)
}

fn make_bound(formula: &str, c: f64, bound: f64, edges: usize) -> SizeBound {
    SizeBound {
        formula: formula.to_owned(),
        constant: c,
        bound,
        edges,
        ratio: if bound > 0.0 { edges as f64 / bound } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(0), 1);
        assert_eq!(ceil_log2(1), 1);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn bounds_are_positive_and_monotone_in_f() {
        let a = general_size_bound(100, 1, 3, 1.0, 0).bound;
        let b = general_size_bound(100, 2, 3, 1.0, 0).bound;
        assert!(a > 0.0 && b > a);
        let w = warmup_size_bound(200, 2, 8.0, 0);
        // 8 * (400 + sqrt(2) * 200^1.5 * log2(200))
        let expected = 8.0 * (400.0 + 2f64.sqrt() * 200f64.powf(1.5) * 200f64.log2());
        assert!((w.bound - expected).abs() < 1e-6);
    }
}
