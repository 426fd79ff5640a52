//! Sparse certificates of λ-vertex-connectivity: a fault-tolerant spanner
//! with `f = λ - 1` and `k = ceil(log2 n)` preserves connectivity under every
//! set of fewer than λ vertex failures.

use crate::error::BuildError;
use crate::graph::Graph;
use crate::meta::{build_ft_spanner, MetaConfig};
use crate::result::{ceil_log2, certificate_size_bound, SpannerResult};

/// Fault budget and stretch parameter used for a certificate of `lambda`.
/// With `lambda = 1` no fault is tolerated, so the smallest budget the
/// builder accepts is used.
pub fn certificate_params(n: usize, lambda: usize) -> (usize, usize) {
    ((lambda.saturating_sub(1)).max(1), ceil_log2(n).max(2))
}

pub fn build_certificate(g: &Graph, lambda: usize, seed: u64, c_k: usize) -> Result<SpannerResult, BuildError> {
    if lambda == 0 || lambda > g.n() {
        return Err(BuildError::Parameter(format!("lambda={lambda} must lie in [1, n={}]", g.n())));
    }
    let (f, k) = certificate_params(g.n(), lambda);
    let mut cfg = MetaConfig::new(f, k, seed);
    cfg.c_k = c_k;
    let mut result = build_ft_spanner(g, &cfg)?;
    result.size_bound = certificate_size_bound(g.n(), lambda, 8.0, result.edges.len());
    Ok(result)
}
