use std::time::Instant;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use vft_core::generate::{generate, GraphSpec, WeightSpec};
use vft_core::graph::Graph;

use crate::build::{run_build, Flavor};

pub const MIN_SEEDS: usize = 5;

/// One sweep: every combination of flavor, f and k, each timed on one graph
/// per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCase {
    pub graph: GraphSpec,
    #[serde(default)]
    pub weights: WeightSpec,
    pub algos: Vec<Flavor>,
    pub f: Vec<usize>,
    pub k: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub c_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub f: usize,
    pub k: usize,
    pub algo: String,
    pub seeds: usize,
    /// Medians over seeds from here on.
    pub edges: usize,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rounds: Option<u64>,
}

/// Rows are only ever appended.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn push(&mut self, row: BenchRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[BenchRow] {
        &self.rows
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("graph\tn\tm\tf\tk\talgo\tseeds\tedges\tseconds\trounds\n");
        for r in &self.rows {
            let rounds = r.rounds.map_or(String::from("-"), |x| x.to_string());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\n",
                r.graph, r.n, r.m, r.f, r.k, r.algo, r.seeds, r.edges, r.seconds, rounds
            ));
        }
        out
    }
}

pub struct Timed {
    pub edges: usize,
    pub seconds: f64,
    pub rounds: Option<u64>,
}

pub fn time_build(g: &Graph, algo: Flavor, f: usize, k: usize, seed: u64, c_k: Option<usize>) -> Result<Timed> {
    let mut spec = algo.spec(f, k, seed);
    spec.c_k = c_k;
    let start = Instant::now();
    let built = run_build(g, &spec)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(Timed { edges: built.result.len(), seconds, rounds: built.rounds.map(|r| r.total_rounds) })
}

/// Upper median.
pub fn median<T: Copy + PartialOrd>(values: &[T]) -> T {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    v[v.len() / 2]
}

/// Runs the cells in order, one at a time so timings do not interfere.
/// The warm-up only has k = 2.
pub fn run_bench(cases: &[BenchCase]) -> Result<BenchTable> {
    let mut table = BenchTable::default();
    for case in cases {
        if case.seeds.len() < MIN_SEEDS {
            bail!("{}: medians need at least {MIN_SEEDS} seeds, got {}", case.graph.label(), case.seeds.len());
        }
        let graphs: Vec<Graph> =
            case.seeds.iter().map(|&s| generate(&case.graph, case.weights, s)).collect::<Result<_, _>>()?;
        for &algo in &case.algos {
            for &k in &case.k {
                if algo == Flavor::Warmup && k != 2 {
                    continue;
                }
                for &f in &case.f {
                    let mut runs = Vec::with_capacity(graphs.len());
                    for (g, &seed) in graphs.iter().zip(&case.seeds) {
                        runs.push(time_build(g, algo, f, k, seed, case.c_k)?);
                    }
                    let rounds: Vec<u64> = runs.iter().filter_map(|r| r.rounds).collect();
                    table.push(BenchRow {
                        graph: case.graph.label(),
                        n: case.graph.n(),
                        m: median(&graphs.iter().map(Graph::m).collect::<Vec<_>>()),
                        f,
                        k,
                        algo: algo.name().to_string(),
                        seeds: runs.len(),
                        edges: median(&runs.iter().map(|r| r.edges).collect::<Vec<_>>()),
                        seconds: median(&runs.iter().map(|r| r.seconds).collect::<Vec<_>>()),
                        rounds: (!rounds.is_empty()).then(|| median(&rounds)),
                    });
                }
            }
        }
    }
    Ok(table)
}
