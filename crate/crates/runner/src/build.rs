use anyhow::Result;
use serde::{Deserialize, Serialize};
use vft_congest::{simulate, DistConfig, RoundReport};
use vft_core::detkit::{build_ft_spanner_det_with, DetConfig};
use vft_core::graph::Graph;
use vft_core::meta::{build_ft_spanner, MetaConfig};
use vft_core::result::{Algo, MisMode, SpannerResult, Variant};
use vft_core::warmup::{build_3spanner, WarmupConfig};

/// Named build recipes used by manifests and bench sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Warmup,
    Meta,
    MetaMod,
    MetaParallel,
    MetaDet,
    Distributed,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Warmup => "warmup",
            Flavor::Meta => "meta",
            Flavor::MetaMod => "meta-mod",
            Flavor::MetaParallel => "meta-parallel",
            Flavor::MetaDet => "meta-det",
            Flavor::Distributed => "distributed",
        }
    }

    pub fn spec(self, f: usize, k: usize, seed: u64) -> BuildSpec {
        let mut spec = BuildSpec::new(Algo::Meta, f, k, seed);
        match self {
            Flavor::Warmup => spec.algo = Algo::Warmup,
            Flavor::Meta => {}
            Flavor::MetaMod => spec.variant = Variant::Modified,
            Flavor::MetaParallel => {
                spec.variant = Variant::Modified;
                spec.mis = MisMode::Parallel;
            }
            Flavor::MetaDet => spec.algo = Algo::MetaDet,
            Flavor::Distributed => spec.algo = Algo::Distributed,
        }
        spec
    }
}

/// Everything a build needs besides the graph. `None` keeps the library default.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildSpec {
    pub algo: Algo,
    pub f: usize,
    pub k: usize,
    pub seed: u64,
    pub variant: Variant,
    pub mis: MisMode,
    pub c_k: Option<usize>,
    pub c_s: Option<usize>,
    pub c_b: Option<u32>,
    pub p: Option<f64>,
    pub hitting_constant: Option<f64>,
    pub timings: bool,
}

impl BuildSpec {
    pub fn new(algo: Algo, f: usize, k: usize, seed: u64) -> Self {
        BuildSpec {
            algo,
            f,
            k,
            seed,
            variant: Variant::Sequential,
            mis: MisMode::Scan,
            c_k: None,
            c_s: None,
            c_b: None,
            p: None,
            hitting_constant: None,
            timings: false,
        }
    }

    pub fn meta_config(&self) -> MetaConfig {
        let mut cfg = MetaConfig::new(self.f, self.k, self.seed);
        cfg.variant = self.variant;
        cfg.mis = self.mis;
        cfg.c_k = self.c_k.unwrap_or(cfg.c_k);
        cfg.c_s = self.c_s.unwrap_or(cfg.c_s);
        cfg.p = self.p;
        cfg.record_timings = self.timings;
        cfg
    }

    pub fn det_config(&self) -> DetConfig {
        let mut cfg = DetConfig::new(self.f, self.k);
        cfg.c_k = self.c_k.unwrap_or(cfg.c_k);
        cfg.hitting_constant = self.hitting_constant.unwrap_or(cfg.hitting_constant);
        cfg.record_timings = self.timings;
        cfg
    }

    pub fn dist_config(&self) -> DistConfig {
        let mut cfg = DistConfig::new(self.f, self.k, self.seed);
        cfg.c_k = self.c_k.unwrap_or(cfg.c_k);
        cfg.c_s = self.c_s.unwrap_or(cfg.c_s);
        cfg.c_b = self.c_b.unwrap_or(cfg.c_b);
        cfg.p = self.p;
        cfg
    }
}

pub struct Built {
    pub result: SpannerResult,
    pub rounds: Option<RoundReport>,
}

pub fn run_build(g: &Graph, spec: &BuildSpec) -> Result<Built> {
    let mut rounds = None;
    let result = match spec.algo {
        Algo::Warmup => {
            let mut cfg = WarmupConfig::new(spec.f, spec.seed);
            cfg.c_s = spec.c_s.unwrap_or(cfg.c_s);
            cfg.p = spec.p;
            cfg.record_timings = spec.timings;
            build_3spanner(g, &cfg)?
        }
        Algo::Meta => build_ft_spanner(g, &spec.meta_config())?,
        Algo::MetaDet => build_ft_spanner_det_with(g, &spec.det_config())?.result,
        Algo::Distributed => {
            let sim = simulate(g, &spec.dist_config())?;
            rounds = Some(sim.report);
            sim.result
        }
    };
    Ok(Built { result, rounds })
}
