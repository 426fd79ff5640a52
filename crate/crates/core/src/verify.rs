//! Ground truth: edge protection, fault-tolerant spanner verification and
//! connectivity-certificate verification.
//!
//! A subgraph `h` is always given as an edge mask over the host graph `g`.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::VerifyError;
use crate::graph::{EdgeId, EdgeSet, Graph, VertexId, Weight};
use crate::rng::{global, Purpose};
use crate::shortest::{components, Dijkstra};

pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { samples } => write!(f, "sampled:{samples}"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(Mode::Exhaustive);
        }
        s.strip_prefix("sampled:")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n > 0)
            .map(|samples| Mode::Sampled { samples })
            .ok_or_else(|| format!("expected `exhaustive` or `sampled:N`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Upper limit on the number of fault sets an exhaustive run may enumerate.
    pub cap: u128,
    /// Seed for sampled mode.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cap: DEFAULT_CAP, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    /// The protected edge, or `None` for a sampled vertex pair.
    pub edge: Option<EdgeId>,
    pub u: VertexId,
    pub v: VertexId,
    pub faults: Vec<VertexId>,
    /// Distance in the subgraph after the faults; `None` when disconnected.
    pub dist: Option<Weight>,
    /// Largest distance the stretch allows.
    pub bound: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeStretch {
    pub edge: EdgeId,
    /// Worst `dist / W(e)` over the fault sets tested; `None` when some set disconnects.
    pub worst: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub f: usize,
    pub k: usize,
    pub fault_sets_tested: u64,
    /// Largest stretch seen on any edge; `None` when some edge was cut off.
    pub worst_stretch: Option<f64>,
    pub edges: Vec<EdgeStretch>,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

/// `sum_{j <= f} C(n, j)`, saturating.
pub fn fault_set_count(n: usize, f: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for j in 0..=f.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Checks edge ids and builds the mask.
pub fn subgraph(g: &Graph, ids: &[EdgeId]) -> Result<EdgeSet, VerifyError> {
    if let Some(&bad) = ids.iter().find(|&&e| e as usize >= g.m()) {
        return Err(VerifyError::NotASubgraph(bad));
    }
    Ok(EdgeSet::from_ids(g.m(), ids.iter().copied()))
}

#[derive(Debug, Clone, PartialEq)]
struct EdgeCheck {
    worst: Option<f64>,
    tested: u64,
    violation: Option<Violation>,
}

/// Whether every fault set of at most `f` vertices avoiding the endpoints
/// leaves `dist_{h \ F}(u, v) <= (2i - 1) W(e)`.
pub fn is_protected(g: &Graph, h: &EdgeSet, e: EdgeId, f: usize, i: usize, cap: u128) -> Result<bool, VerifyError> {
    if e as usize >= g.m() {
        return Err(VerifyError::NotASubgraph(e));
    }
    if i == 0 {
        return Err(VerifyError::Parameter("stretch index must be at least 1".into()));
    }
    let needed = fault_set_count(g.n().saturating_sub(2), f);
    if needed > cap {
        return Err(VerifyError::BudgetExceeded { needed, cap });
    }
    let mut ws = Dijkstra::new(g.n());
    Ok(check_edge(g, h, e, f, i, &mut ws).violation.is_none())
}

/// Depth-first search over fault sets: a fault set that breaks the edge must
/// hit the current short path, so only its internal vertices are branched on.
fn check_edge(g: &Graph, h: &EdgeSet, e: EdgeId, f: usize, i: usize, ws: &mut Dijkstra) -> EdgeCheck {
    let edge = *g.edge(e);
    if h.contains(e) {
        return EdgeCheck { worst: Some(1.0), tested: 1, violation: None };
    }
    let bound = (2 * i as Weight - 1) * edge.w;
    let mut blocked = vec![false; g.n()];
    let mut faults = Vec::new();
    let mut check = EdgeCheck { worst: Some(0.0), tested: 0, violation: None };
    branch(g, h, &edge, f, bound, ws, &mut blocked, &mut faults, &mut check);
    check
}

#[allow(clippy::too_many_arguments)]
fn branch(
    g: &Graph,
    h: &EdgeSet,
    edge: &crate::graph::Edge,
    f: usize,
    bound: Weight,
    ws: &mut Dijkstra,
    blocked: &mut [bool],
    faults: &mut Vec<VertexId>,
    check: &mut EdgeCheck,
) {
    check.tested += 1;
    let found = ws.path(g, edge.u, edge.v, Some(h), blocked, None);
    let dist = found.as_ref().map(|(d, _)| *d);
    match dist {
        None => check.worst = None,
        Some(d) => {
            if let Some(w) = check.worst.as_mut() {
                *w = w.max(d as f64 / edge.w as f64);
            }
        }
    }
    if dist.is_none_or(|d| d > bound) {
        let mut sorted = faults.clone();
        sorted.sort_unstable();
        check.violation = Some(Violation { edge: Some(edge.id), u: edge.u, v: edge.v, faults: sorted, dist, bound });
        return;
    }
    if faults.len() == f {
        return;
    }
    let (_, path) = found.expect("distance found");
    for &x in &path[1..path.len() - 1] {
        blocked[x as usize] = true;
        faults.push(x);
        branch(g, h, edge, f, bound, ws, blocked, faults, check);
        faults.pop();
        blocked[x as usize] = false;
        if check.violation.is_some() {
            return;
        }
    }
}

/// Checks that `h` is an `f`-vertex-fault-tolerant `(2k - 1)`-spanner of `g`.
pub fn verify_spanner(
    g: &Graph,
    h: &EdgeSet,
    f: usize,
    k: usize,
    mode: Mode,
    opts: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if h.capacity() != g.m() {
        return Err(VerifyError::Parameter("edge mask does not match the host graph".into()));
    }
    if k == 0 {
        return Err(VerifyError::Parameter("k must be at least 1".into()));
    }
    let (checks, extra) = match mode {
        Mode::Exhaustive => {
            let needed = fault_set_count(g.n().saturating_sub(2), f).saturating_mul(g.m() as u128);
            if needed > opts.cap {
                return Err(VerifyError::BudgetExceeded { needed, cap: opts.cap });
            }
            let checks: Vec<EdgeCheck> = (0..g.m() as EdgeId)
                .into_par_iter()
                .map_init(|| Dijkstra::new(g.n()), |ws, e| check_edge(g, h, e, f, k, ws))
                .collect();
            (checks, Vec::new())
        }
        Mode::Sampled { samples } => sampled(g, h, f, k, samples, opts.seed),
    };
    let mut report = VerificationReport {
        mode,
        f,
        k,
        fault_sets_tested: checks.iter().map(|c| c.tested).sum::<u64>() + extra.len() as u64,
        worst_stretch: Some(0.0),
        edges: Vec::with_capacity(checks.len()),
        violations: Vec::new(),
        pass: false,
    };
    for (e, c) in checks.into_iter().enumerate() {
        report.worst_stretch = match (report.worst_stretch, c.worst) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        report.edges.push(EdgeStretch { edge: e as EdgeId, worst: c.worst });
        report.violations.extend(c.violation);
    }
    report.violations.extend(extra.into_iter().flatten());
    report.violations.sort();
    report.pass = report.violations.is_empty();
    Ok(report)
}

fn random_faults(rng: &mut impl Rng, n: usize, size: usize, avoid: [VertexId; 2]) -> Vec<VertexId> {
    let pool: Vec<VertexId> = (0..n as VertexId).filter(|x| !avoid.contains(x)).collect();
    let size = size.min(pool.len());
    let mut out: Vec<VertexId> = sample(rng, pool.len(), size).into_iter().map(|j| pool[j]).collect();
    out.sort_unstable();
    out
}

/// Per edge: `samples` random fault sets of size `f`. Then `samples` random
/// `(u, v, F)` triples compared against distances in `g \ F`.
fn sampled(
    g: &Graph,
    h: &EdgeSet,
    f: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> (Vec<EdgeCheck>, Vec<Option<Violation>>) {
    let stretch = (2 * k - 1) as Weight;
    let checks: Vec<EdgeCheck> = (0..g.m() as EdgeId)
        .into_par_iter()
        .map_init(
            || Dijkstra::new(g.n()),
            |ws, e| {
                let edge = *g.edge(e);
                if h.contains(e) {
                    return EdgeCheck { worst: Some(1.0), tested: 1, violation: None };
                }
                let mut rng = crate::rng::stream(seed, e, 0, Purpose::Auxiliary);
                let bound = stretch * edge.w;
                let mut check = EdgeCheck { worst: Some(0.0), tested: 0, violation: None };
                for _ in 0..samples {
                    let faults = random_faults(&mut rng, g.n(), f, [edge.u, edge.v]);
                    let mut blocked = vec![false; g.n()];
                    for &x in &faults {
                        blocked[x as usize] = true;
                    }
                    check.tested += 1;
                    let dist = ws.distance(g, edge.u, edge.v, Some(h), &blocked, None);
                    match dist {
                        Some(d) => {
                            if let Some(w) = check.worst.as_mut() {
                                *w = w.max(d as f64 / edge.w as f64);
                            }
                        }
                        None => check.worst = None,
                    }
                    if dist.is_none_or(|d| d > bound) && check.violation.is_none() {
                        check.violation = Some(Violation { edge: Some(e), u: edge.u, v: edge.v, faults, dist, bound });
                    }
                }
                check
            },
        )
        .collect();
    let mut rng = global(seed, Purpose::Auxiliary);
    let triples: Vec<(VertexId, VertexId, Vec<VertexId>)> = if g.n() < 2 {
        Vec::new()
    } else {
        (0..samples)
            .map(|_| {
                let u = rng.gen_range(0..g.n() as VertexId);
                let mut v = rng.gen_range(0..g.n() as VertexId - 1);
                if v >= u {
                    v += 1;
                }
                let faults = random_faults(&mut rng, g.n(), f, [u, v]);
                (u, v, faults)
            })
            .collect()
    };
    let pairs = triples
        .into_par_iter()
        .map_init(
            || Dijkstra::new(g.n()),
            |ws, (u, v, faults)| {
                let mut blocked = vec![false; g.n()];
                for &x in &faults {
                    blocked[x as usize] = true;
                }
                let base = ws.distance(g, u, v, None, &blocked, None)?;
                let dist = ws.distance(g, u, v, Some(h), &blocked, None);
                let bound = stretch * base;
                dist.is_none_or(|d| d > bound).then_some(Violation { edge: None, u, v, faults, dist, bound })
            },
        )
        .collect();
    (checks, pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutWitness {
    pub faults: Vec<VertexId>,
    /// Connected in `g \ F` but not in `h \ F`.
    pub u: VertexId,
    pub v: VertexId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub mode: Mode,
    pub lambda: usize,
    pub fault_sets_tested: u64,
    pub violations: Vec<CutWitness>,
    pub pass: bool,
}

/// Checks that for every fault set of at most `lambda - 1` vertices, `h \ F`
/// and `g \ F` connect the same pairs. Falls back to `fallback_samples`
/// random fault sets of size `lambda - 1` when enumeration exceeds the cap.
pub fn verify_certificate(
    g: &Graph,
    h: &EdgeSet,
    lambda: usize,
    fallback_samples: usize,
    opts: VerifyOptions,
) -> Result<CertificateReport, VerifyError> {
    if lambda == 0 {
        return Err(VerifyError::Parameter("lambda must be at least 1".into()));
    }
    if h.capacity() != g.m() {
        return Err(VerifyError::Parameter("edge mask does not match the host graph".into()));
    }
    let n = g.n();
    let size = lambda - 1;
    let needed = fault_set_count(n, size);
    let (mode, sets): (Mode, Vec<Vec<VertexId>>) = if needed <= opts.cap {
        (Mode::Exhaustive, all_subsets(n, size))
    } else {
        let mut rng = global(opts.seed, Purpose::Auxiliary);
        let sets = (0..fallback_samples).map(|_| random_faults(&mut rng, n, size, [u32::MAX; 2])).collect();
        (Mode::Sampled { samples: fallback_samples }, sets)
    };
    let tested = sets.len() as u64;
    let mut violations: Vec<CutWitness> = sets
        .into_par_iter()
        .filter_map(|faults| {
            let mut blocked = vec![false; n];
            for &x in &faults {
                blocked[x as usize] = true;
            }
            cut_witness(g, h, &blocked).map(|(u, v)| CutWitness { faults, u, v })
        })
        .collect();
    violations.sort();
    Ok(CertificateReport { mode, lambda, fault_sets_tested: tested, pass: violations.is_empty(), violations })
}

/// Since `h` is a subgraph, its components refine those of `g`; the first
/// vertex whose `h`-component is not the first seen inside its `g`-component
/// gives a separated pair.
fn cut_witness(g: &Graph, h: &EdgeSet, blocked: &[bool]) -> Option<(VertexId, VertexId)> {
    let in_g = components(g, None, blocked);
    let in_h = components(g, Some(h), blocked);
    let mut first: Vec<Option<(VertexId, u32)>> = vec![None; g.n()];
    for x in g.vertices() {
        let cg = in_g[x as usize];
        if cg == u32::MAX {
            continue;
        }
        match first[cg as usize] {
            None => first[cg as usize] = Some((x, in_h[x as usize])),
            Some((rep, ch)) if ch != in_h[x as usize] => return Some((rep, x)),
            Some(_) => {}
        }
    }
    None
}

/// Every subset of `0..n` with at most `size` elements, in lexicographic order by size.
pub fn all_subsets(n: usize, size: usize) -> Vec<Vec<VertexId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..size.min(n) {
        let mut next = Vec::new();
        for set in &frontier {
            let start = set.last().map_or(0, |&x: &VertexId| x + 1);
            for x in start..n as VertexId {
                let mut s = set.clone();
                s.push(x);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphSpec, WeightSpec};

    #[test]
    fn single_edge_is_protected() {
        let g = Graph::parse_edge_list("0 1 3\n1 2 1").unwrap();
        let h = EdgeSet::from_ids(g.m(), [0]);
        assert!(is_protected(&g, &h, 0, 1, 1, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn two_hop_path_fails_under_one_fault() {
        let g = Graph::parse_edge_list("0 1 1\n1 2 1\n0 2 2").unwrap();
        let h = EdgeSet::from_ids(g.m(), [0, 1]);
        assert!(!is_protected(&g, &h, 2, 1, 1, DEFAULT_CAP).unwrap());
        assert!(is_protected(&g, &h, 2, 0, 1, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn triangle_heavy_edge_kept() {
        let g = Graph::parse_edge_list("0 1 1\n1 2 2\n0 2 4").unwrap();
        assert!(is_protected(&g, &EdgeSet::full(3), 2, 1, 2, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn cycle_minus_edge_has_stretch_five() {
        let g = generate(&GraphSpec::Cycle { n: 6 }, WeightSpec::Unit, 0).unwrap();
        let h = EdgeSet::from_ids(g.m(), 1..6);
        let r = verify_spanner(&g, &h, 0, 2, Mode::Exhaustive, VerifyOptions::default()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].dist, Some(5));
        assert_eq!(r.violations[0].bound, 3);
        assert_eq!(r.worst_stretch, Some(5.0));
    }

    #[test]
    fn identity_subgraph_passes() {
        let g = generate(&GraphSpec::Gnp { n: 20, p: 0.3 }, WeightSpec::Uniform { lo: 1, hi: 5 }, 1).unwrap();
        let h = EdgeSet::full(g.m());
        for mode in [Mode::Exhaustive, Mode::Sampled { samples: 20 }] {
            assert!(verify_spanner(&g, &h, 2, 2, mode, VerifyOptions::default()).unwrap().pass);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = generate(&GraphSpec::Complete { n: 30 }, WeightSpec::Unit, 0).unwrap();
        let h = EdgeSet::full(g.m());
        let opts = VerifyOptions { cap: 1000, seed: 0 };
        assert!(matches!(
            verify_spanner(&g, &h, 2, 2, Mode::Exhaustive, opts),
            Err(VerifyError::BudgetExceeded { .. })
        ));
        assert!(is_protected(&g, &h, 0, 3, 2, 100).is_err());
    }

    #[test]
    fn certificates() {
        let c6 = generate(&GraphSpec::Cycle { n: 6 }, WeightSpec::Unit, 0).unwrap();
        let r = verify_certificate(&c6, &EdgeSet::full(6), 2, 100, VerifyOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.mode, Mode::Exhaustive);
        assert_eq!(r.fault_sets_tested, 7);

        let k4 = generate(&GraphSpec::Complete { n: 4 }, WeightSpec::Unit, 0).unwrap();
        let star: Vec<EdgeId> = (0..k4.m() as EdgeId).filter(|&e| k4.edge(e).touches(0)).collect();
        let h = subgraph(&k4, &star).unwrap();
        let r = verify_certificate(&k4, &h, 2, 100, VerifyOptions::default()).unwrap();
        assert!(!r.pass);
        assert!(r.violations.iter().all(|w| w.faults == vec![0]));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exhaustive".parse::<Mode>().unwrap(), Mode::Exhaustive);
        assert_eq!("sampled:40".parse::<Mode>().unwrap(), Mode::Sampled { samples: 40 });
        assert!("sampled:0".parse::<Mode>().is_err());
        assert!("sampled".parse::<Mode>().is_err());
        assert_eq!(Mode::Sampled { samples: 7 }.to_string(), "sampled:7");
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(all_subsets(4, 2).len() as u128, fault_set_count(4, 2));
        assert_eq!(fault_set_count(38, 2), 1 + 38 + 703);
        assert_eq!(all_subsets(3, 5).len(), 8);
    }
}
