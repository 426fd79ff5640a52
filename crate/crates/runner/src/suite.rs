use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vft_core::certificate::build_certificate;
use vft_core::generate::{generate, GraphSpec, WeightSpec};
use vft_core::graph::{EdgeSet, Graph, VertexId};
use vft_core::verify::{verify_certificate, verify_spanner, Mode, VerifyOptions};

use crate::build::{run_build, Flavor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseAlgo {
    Warmup,
    Meta,
    MetaMod,
    MetaParallel,
    MetaDet,
    Distributed,
    /// Build a connectivity certificate for `lambda`.
    Certificate,
    /// The host graph minus `drop_edges`, no build at all.
    Subgraph,
}

impl CaseAlgo {
    fn flavor(self) -> Option<Flavor> {
        Some(match self {
            CaseAlgo::Warmup => Flavor::Warmup,
            CaseAlgo::Meta => Flavor::Meta,
            CaseAlgo::MetaMod => Flavor::MetaMod,
            CaseAlgo::MetaParallel => Flavor::MetaParallel,
            CaseAlgo::MetaDet => Flavor::MetaDet,
            CaseAlgo::Distributed => Flavor::Distributed,
            CaseAlgo::Certificate | CaseAlgo::Subgraph => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_stretch: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
}

/// One manifest entry. With `lambda` set the subgraph is checked as a
/// connectivity certificate, otherwise as an `f`-fault-tolerant `(2k-1)`-spanner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCase {
    pub name: String,
    pub graph: GraphSpec,
    #[serde(default)]
    pub weights: WeightSpec,
    #[serde(default)]
    pub f: usize,
    #[serde(default = "two")]
    pub k: usize,
    pub algo: CaseAlgo,
    #[serde(default = "exhaustive")]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drop_edges: Vec<(VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_k: Option<usize>,
    pub expected: Expected,
    pub seeds: Vec<u64>,
    /// How the expected outcome was obtained.
    #[serde(default)]
    pub why: String,
}

fn two() -> usize {
    2
}

fn exhaustive() -> Mode {
    Mode::Exhaustive
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub worst_stretch: Option<f64>,
    pub edges: usize,
    pub matched: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

pub fn load_manifest(path: &Path) -> Result<Vec<SuiteCase>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn subgraph_of(g: &Graph, case: &SuiteCase, seed: u64) -> Result<EdgeSet> {
    if let Some(flavor) = case.algo.flavor() {
        let mut spec = flavor.spec(case.f, case.k, seed);
        spec.c_k = case.c_k;
        return Ok(run_build(g, &spec)?.result.edge_set());
    }
    match case.algo {
        CaseAlgo::Certificate => {
            let Some(lambda) = case.lambda else { bail!("{}: certificate cases need lambda", case.name) };
            Ok(build_certificate(g, lambda, seed, case.c_k.unwrap_or(20))?.edge_set())
        }
        _ => {
            let mut h = EdgeSet::full(g.m());
            for &(u, v) in &case.drop_edges {
                let e = g.find_edge(u, v).with_context(|| format!("{}: no edge {u}-{v}", case.name))?;
                h.remove(e);
            }
            Ok(h)
        }
    }
}

pub fn run_case(case: &SuiteCase, seed: u64) -> Result<CaseResult> {
    let g = generate(&case.graph, case.weights, seed)?;
    let h = subgraph_of(&g, case, seed)?;
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let (pass, worst_stretch) = match case.lambda {
        Some(lambda) => (verify_certificate(&g, &h, lambda, 1000, opts)?.pass, None),
        None => {
            let report = verify_spanner(&g, &h, case.f, case.k, case.mode, opts)?;
            (report.pass, report.worst_stretch)
        }
    };
    let outcome = if pass { Outcome::Pass } else { Outcome::Fail };
    let edges = h.len();
    let mut detail = Vec::new();
    if outcome != case.expected.outcome {
        detail.push(format!("outcome {outcome:?}, expected {:?}", case.expected.outcome));
    }
    if let Some(want) = case.expected.worst_stretch {
        if worst_stretch.is_none_or(|got| (got - want).abs() > 1e-9) {
            detail.push(format!("worst stretch {worst_stretch:?}, expected {want}"));
        }
    }
    if let Some(want) = case.expected.edges {
        if edges != want {
            detail.push(format!("{edges} edges, expected {want}"));
        }
    }
    Ok(CaseResult {
        name: case.name.clone(),
        seed,
        outcome,
        worst_stretch,
        edges,
        matched: detail.is_empty(),
        detail: detail.join("; "),
    })
}

/// Every (case, seed) pair, run in parallel and reported in manifest order.
pub fn run_suite(cases: &[SuiteCase]) -> Result<Vec<CaseResult>> {
    let jobs: Vec<(&SuiteCase, u64)> = cases.iter().flat_map(|c| c.seeds.iter().map(move |&s| (c, s))).collect();
    jobs.into_par_iter().map(|(c, s)| run_case(c, s)).collect()
}
