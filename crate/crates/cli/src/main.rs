use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vft_congest::{simulate, RoundReport};
use vft_core::certificate::build_certificate;
use vft_core::detkit::{beta_hitting_set, HittingInstance};
use vft_core::generate::generate;
use vft_core::graph::Graph;
use vft_core::result::{Algo, MisMode, SpannerResult, Variant};
use vft_core::verify::{subgraph, verify_certificate, verify_spanner, Mode, VerifyOptions, DEFAULT_CAP};
use vft_runner::bench::{run_bench, BenchCase};
use vft_runner::build::{run_build, BuildSpec};
use vft_runner::input::{parse_graph_spec, parse_weights, read_graph};
use vft_runner::misbench::{mis_tsv, run_mis_bench, MisBenchConfig};
use vft_runner::report::{phase_tsv, render_human};
use vft_runner::suite::{load_manifest, run_suite};
use vft_runner::to_json;

#[derive(Parser)]
#[command(name = "vft", version, about = "Vertex fault-tolerant spanners and connectivity certificates")]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "VFT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GraphSource {
    /// Edge-list file (`u v w` per line).
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec such as `gnp(30,0.4)`, `grid(6x6)` or `K_15`.
    #[arg(long)]
    gen: Option<String>,
    /// `unit` or `uniform:LO:HI`.
    #[arg(long, default_value = "unit")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
}

impl GraphSource {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, &self.gen) {
            (Some(path), _) => read_graph(path),
            (None, Some(spec)) => {
                Ok(generate(&parse_graph_spec(spec)?, parse_weights(&self.weights)?, self.graph_seed)?)
            }
            (None, None) => bail!("give --graph FILE or --gen SPEC"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Warmup,
    Meta,
    MetaDet,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Seq,
    Mod,
}

#[derive(Clone, Copy, ValueEnum)]
enum MisArg {
    Scan,
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Human,
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph and write it as an edge list.
    Gen {
        spec: String,
        #[arg(long, default_value = "unit")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a fault-tolerant spanner and print the result as JSON.
    Build {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value = "meta")]
        algo: AlgoArg,
        #[arg(long)]
        f: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value = "seq")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "scan")]
        mis: MisArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ck: Option<usize>,
        #[arg(long)]
        cs: Option<usize>,
        /// Center sampling probability, overriding `(f/n)^(1/k)`.
        #[arg(long)]
        p: Option<f64>,
        /// Admissibility constant of the deterministic build's hitting sets.
        #[arg(long)]
        hitting_constant: Option<f64>,
        /// Record wall-clock time per phase (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timings: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a result file against its host graph. Exit 1 on failure.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        result: PathBuf,
        /// Defaults to the f recorded in the result.
        #[arg(long)]
        f: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Check a connectivity certificate for this lambda instead.
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a lambda-vertex-connectivity certificate.
    Certificate {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        lambda: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        ck: usize,
        /// Verify the certificate and exit 1 if it fails.
        #[arg(long)]
        check: bool,
        /// Where to write the check report (stderr summary otherwise).
        #[arg(long, requires = "check")]
        check_out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the distributed build in the CONGEST simulator.
    Simulate {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        f: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bandwidth is `cb * ceil(log2 n)` bits per edge per round.
        #[arg(long, default_value_t = 4)]
        cb: u32,
        #[arg(long)]
        ck: Option<usize>,
        #[arg(long)]
        cs: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Dump the binary message log here.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Parallel greedy MIS against the sequential scan on random instances (TSV).
    MisBench {
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_paths: usize,
        #[arg(long, default_value_t = 60)]
        max_vertices: u32,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve a hitting-set instance given as JSON.
    HittingSet {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Time builds over a JSON list of sweeps.
    Bench {
        cases: PathBuf,
        #[arg(long, value_enum, default_value = "tsv")]
        format: TableFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Summarize a stored result.
    Report {
        result: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
    },
    /// Run suite manifests. Exit 1 if any case misses its expectation.
    RunSuite {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_result(path: &Path) -> Result<SpannerResult> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct Simulated {
    result: SpannerResult,
    report: RoundReport,
}

#[derive(Serialize)]
struct HittingOutput {
    set: Vec<u32>,
    size: usize,
    /// `|ground| / delta`.
    limit: f64,
    beta: usize,
    /// Fewest picks inside any one set.
    min_hits: usize,
}

/// `Ok(true)` when the command passed.
fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Gen { spec, weights, seed, out } => {
            let g = generate(&parse_graph_spec(&spec)?, parse_weights(&weights)?, seed)?;
            emit(&out, &g.to_edge_list())?;
        }
        Cmd::Build { source, algo, f, k, variant, mis, seed, ck, cs, p, hitting_constant, timings, out } => {
            let g = source.load()?;
            let algo = match algo {
                AlgoArg::Warmup => Algo::Warmup,
                AlgoArg::Meta => Algo::Meta,
                AlgoArg::MetaDet => Algo::MetaDet,
            };
            let mut spec = BuildSpec::new(algo, f, k, seed);
            spec.variant = match variant {
                VariantArg::Seq => Variant::Sequential,
                VariantArg::Mod => Variant::Modified,
            };
            spec.mis = match mis {
                MisArg::Scan => MisMode::Scan,
                MisArg::Parallel => MisMode::Parallel,
            };
            if spec.mis == MisMode::Parallel && spec.variant != Variant::Modified {
                bail!("--mis parallel needs --variant mod");
            }
            spec.c_k = ck;
            spec.c_s = cs;
            spec.p = p;
            spec.hitting_constant = hitting_constant;
            spec.timings = timings;
            emit(&out, &to_json(&run_build(&g, &spec)?.result))?;
        }
        Cmd::Verify { source, result, f, k, lambda, mode, cap, seed, out } => {
            let g = source.load()?;
            let r = read_result(&result)?;
            if (r.graph.n, r.graph.m) != (g.n(), g.m()) {
                bail!("result is for n={} m={}, graph has n={} m={}", r.graph.n, r.graph.m, g.n(), g.m());
            }
            let h = subgraph(&g, &r.edges)?;
            let opts = VerifyOptions { cap, seed };
            if let Some(lambda) = lambda {
                let samples = match mode {
                    Mode::Sampled { samples } => samples,
                    Mode::Exhaustive => 1000,
                };
                let report = verify_certificate(&g, &h, lambda, samples, opts)?;
                emit(&out, &to_json(&report))?;
                return Ok(report.pass);
            }
            let report = verify_spanner(&g, &h, f.unwrap_or(r.params.f), k.unwrap_or(r.params.k), mode, opts)?;
            emit(&out, &to_json(&report))?;
            return Ok(report.pass);
        }
        Cmd::Certificate { source, lambda, seed, ck, check, check_out, cap, out } => {
            let g = source.load()?;
            let r = build_certificate(&g, lambda, seed, ck)?;
            emit(&out, &to_json(&r))?;
            if check {
                let report = verify_certificate(&g, &r.edge_set(), lambda, 1000, VerifyOptions { cap, seed })?;
                match &check_out {
                    Some(_) => emit(&check_out, &to_json(&report))?,
                    None => eprintln!(
                        "certificate check ({}): {} after {} fault sets",
                        report.mode,
                        if report.pass { "pass" } else { "FAIL" },
                        report.fault_sets_tested
                    ),
                }
                return Ok(report.pass);
            }
        }
        Cmd::Simulate { source, f, k, seed, cb, ck, cs, p, log, out } => {
            let g = source.load()?;
            let mut spec = BuildSpec::new(Algo::Distributed, f, k, seed);
            spec.c_b = Some(cb);
            spec.c_k = ck;
            spec.c_s = cs;
            spec.p = p;
            let mut cfg = spec.dist_config();
            cfg.record_log = log.is_some();
            let sim = simulate(&g, &cfg)?;
            if let (Some(path), Some(entries)) = (&log, &sim.log) {
                std::fs::write(path, vft_congest::log::encode(entries))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            emit(&out, &to_json(&Simulated { result: sim.result, report: sim.report }))?;
        }
        Cmd::MisBench { instances, seed, max_paths, max_vertices, max_len, out } => {
            let rows = run_mis_bench(&MisBenchConfig { instances, seed, max_paths, max_vertices, max_len });
            emit(&out, &mis_tsv(&rows))?;
            let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio()).collect();
            ratios.sort_by(f64::total_cmp);
            let disagree = rows.iter().filter(|r| !r.agrees).count();
            if let Some(m) = ratios.get(ratios.len() / 2) {
                eprintln!("{} instances, {disagree} disagreements, median rounds/log2^2 = {m:.3}", rows.len());
            }
            return Ok(disagree == 0);
        }
        Cmd::HittingSet { instance, out } => {
            let text = std::fs::read_to_string(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let inst: HittingInstance = serde_json::from_str(&text).context("parsing the instance")?;
            let set = beta_hitting_set(&inst)?;
            let min_hits =
                inst.sets.iter().map(|s| s.iter().filter(|x| set.binary_search(x).is_ok()).count()).min().unwrap_or(0);
            let limit = inst.ground.len() as f64 / inst.delta;
            let ok = set.len() as f64 <= limit && min_hits >= inst.beta;
            emit(&out, &to_json(&HittingOutput { size: set.len(), set, limit, beta: inst.beta, min_hits }))?;
            return Ok(ok);
        }
        Cmd::Bench { cases, format, out } => {
            let text = std::fs::read_to_string(&cases).with_context(|| format!("reading {}", cases.display()))?;
            let cases: Vec<BenchCase> = serde_json::from_str(&text).context("parsing bench cases")?;
            let table = run_bench(&cases)?;
            let text = match format {
                TableFormat::Tsv => table.to_tsv(),
                TableFormat::Json => to_json(&table),
            };
            emit(&out, &text)?;
        }
        Cmd::Report { result, format } => {
            let r = read_result(&result)?;
            let text = match format {
                ReportFormat::Human => render_human(&r),
                ReportFormat::Tsv => phase_tsv(&r),
                ReportFormat::Json => to_json(&r),
            };
            print!("{text}");
        }
        Cmd::RunSuite { manifests } => {
            let mut all_ok = true;
            for path in manifests {
                let cases = load_manifest(&path)?;
                let results = run_suite(&cases)?;
                let missed = results.iter().filter(|r| !r.matched).count();
                for r in &results {
                    let stretch = r.worst_stretch.map_or(String::from("-"), |s| format!("{s:.3}"));
                    let verdict = if r.matched { "ok" } else { "MISMATCH" };
                    println!(
                        "{verdict}\t{}\tseed={}\t{:?}\tstretch={stretch}\tedges={}\t{}",
                        r.name, r.seed, r.outcome, r.edges, r.detail
                    );
                }
                println!("{}: {} runs, {missed} mismatched", path.display(), results.len());
                all_ok &= missed == 0;
            }
            return Ok(all_ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
