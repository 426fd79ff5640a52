use vft_core::detkit::{build_ft_spanner_det_with, DetConfig};
use vft_core::generate::{generate, GraphSpec, WeightSpec};
use vft_core::meta::{build_ft_spanner, MetaConfig};
use vft_core::result::{MisMode, Variant};
use vft_core::verify::{subgraph, verify_spanner, Mode, VerifyOptions};
use vft_core::warmup::{build_3spanner, WarmupConfig};
use vft_core::{Graph, SpannerResult};

fn assert_spanner(g: &Graph, r: &SpannerResult, f: usize, k: usize, what: &str) {
    let h = subgraph(g, &r.edges).unwrap();
    let rep = verify_spanner(g, &h, f, k, Mode::Exhaustive, VerifyOptions::default()).unwrap();
    assert!(rep.pass, "{what}: {:?}", rep.violations.first());
}

fn graphs() -> Vec<(String, Graph)> {
    let specs = [
        GraphSpec::Gnp { n: 30, p: 0.4 },
        GraphSpec::RandomRegular { n: 24, d: 6 },
        GraphSpec::Complete { n: 14 },
        GraphSpec::Grid { rows: 5, cols: 5 },
    ];
    let mut out = Vec::new();
    for (j, spec) in specs.iter().enumerate() {
        for weights in [WeightSpec::Unit, WeightSpec::Uniform { lo: 1, hi: 20 }] {
            let g = generate(spec, weights, 100 + j as u64).unwrap();
            out.push((format!("{} {:?}", spec.label(), weights), g));
        }
    }
    out
}

#[test]
fn meta_variants_with_small_quota() {
    for (name, g) in graphs() {
        for (f, k) in [(1, 2), (2, 2), (1, 3), (2, 3)] {
            for c_k in [1, 2] {
                for (variant, mis) in [
                    (Variant::Sequential, MisMode::Scan),
                    (Variant::Modified, MisMode::Scan),
                    (Variant::Modified, MisMode::Parallel),
                ] {
                    let mut cfg = MetaConfig::new(f, k, 7);
                    cfg.c_k = c_k;
                    cfg.variant = variant;
                    cfg.mis = mis;
                    let r = build_ft_spanner(&g, &cfg).unwrap();
                    assert_spanner(&g, &r, f, k, &format!("{name} f={f} k={k} c_k={c_k} {variant:?}/{mis:?}"));
                }
            }
        }
    }
}

#[test]
fn deterministic_with_small_quota() {
    for (name, g) in graphs() {
        for (f, k) in [(1, 2), (2, 3)] {
            for c_k in [1, 2] {
                let mut cfg = DetConfig::new(f, k);
                cfg.c_k = c_k;
                cfg.hitting_constant = 0.25;
                let r = build_ft_spanner_det_with(&g, &cfg).unwrap().result;
                assert_spanner(&g, &r, f, k, &format!("{name} det f={f} k={k} c_k={c_k}"));
            }
        }
    }
}

#[test]
fn warmup_with_dense_centers() {
    for (name, g) in graphs() {
        for f in [1, 2] {
            for p in [0.3, 0.6] {
                let mut cfg = WarmupConfig::new(f, 3);
                cfg.p = Some(p);
                let r = build_3spanner(&g, &cfg).unwrap();
                assert_spanner(&g, &r, f, 2, &format!("{name} warmup f={f} p={p}"));
            }
        }
    }
}

#[test]
fn small_quota_sparsifies_dense_graphs() {
    let g = generate(&GraphSpec::Complete { n: 24 }, WeightSpec::Uniform { lo: 1, hi: 50 }, 5).unwrap();
    let mut cfg = MetaConfig::new(1, 2, 11);
    cfg.c_k = 1;
    let r = build_ft_spanner(&g, &cfg).unwrap();
    assert!(r.phases[0].clustered > 0);
    assert!(r.len() < g.m(), "{} of {}", r.len(), g.m());
    assert_spanner(&g, &r, 1, 2, "K_24");
}
