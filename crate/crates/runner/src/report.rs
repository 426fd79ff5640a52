use std::fmt::Write;

use vft_core::result::SpannerResult;

pub fn render_human(r: &SpannerResult) -> String {
    let mut out = String::new();
    let p = &r.params;
    let _ = writeln!(out, "algo        {}", serde_json::to_value(r.algo).unwrap().as_str().unwrap_or("?"));
    let _ = writeln!(out, "graph       n={} m={}", r.graph.n, r.graph.m);
    let seed = p.seed.map_or(String::from("-"), |s| s.to_string());
    let _ = writeln!(
        out,
        "params      f={} k={} seed={} quota={} samples={}",
        p.f, p.k, seed, p.cluster_quota, p.samples_per_vertex
    );
    let _ = writeln!(out, "edges       {}", r.edges.len());
    let b = &r.size_bound;
    let _ = writeln!(out, "size bound  {:.1} ({}), ratio {:.4}", b.bound, b.formula, b.ratio);
    if let Some(w) = &r.warmup {
        let _ = writeln!(
            out,
            "warm-up     centers={} unclustered={} step1={} scan={}",
            w.centers, w.unclustered, w.first_step_edges, w.scan_edges
        );
    }
    if !r.phases.is_empty() {
        let _ = writeln!(out, "phase  centers  clustered  new  tree  le  remaining");
        for t in &r.phases {
            let _ = writeln!(
                out,
                "{:>5}  {:>7}  {:>9}  {:>3}  {:>4}  {:>2}  {:>9}",
                t.phase, t.centers, t.clustered, t.new_edges, t.tree_edges, t.le_edges, t.remaining
            );
        }
    }
    out
}

/// One row per phase, for plotting.
pub fn phase_tsv(r: &SpannerResult) -> String {
    let mut out = String::from(
        "phase\tcenters\tclustered\tnew_edges\ttree_edges\tle_edges\tremaining\tmax_cutoff\tmean_cutoff\twall_ms\n",
    );
    for t in &r.phases {
        let wall = t.wall_ms.map_or(String::from("-"), |x| format!("{x:.3}"));
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            t.phase,
            t.centers,
            t.clustered,
            t.new_edges,
            t.tree_edges,
            t.le_edges,
            t.remaining,
            t.max_cutoff,
            t.mean_cutoff,
            wall
        );
    }
    out
}
