use std::path::Path;

use anyhow::{bail, Context, Result};
use vft_core::generate::{GraphSpec, WeightSpec};
use vft_core::graph::Graph;

/// Parses `gnp(100,0.1)`, `random-regular(30,6)`, `grid(6x6)`, `complete(15)`,
/// `tree(30)`, `cycle(20)`, `star(10)`, `path(8)`. `K_15` and `C_20` are accepted too.
pub fn parse_graph_spec(text: &str) -> Result<GraphSpec> {
    let s = text.trim();
    if let Some(n) = s.strip_prefix("K_") {
        return Ok(GraphSpec::Complete { n: n.parse().context("K_<n>")? });
    }
    if let Some(n) = s.strip_prefix("C_") {
        return Ok(GraphSpec::Cycle { n: n.parse().context("C_<n>")? });
    }
    let Some((name, rest)) = s.split_once('(') else {
        bail!("graph spec `{s}` should look like name(args)");
    };
    let Some(args) = rest.strip_suffix(')') else {
        bail!("graph spec `{s}` is missing `)`");
    };
    let args: Vec<&str> = args.split([',', 'x']).map(str::trim).collect();
    let int = |i: usize| -> Result<usize> {
        args.get(i)
            .with_context(|| format!("`{s}`: missing argument {}", i + 1))?
            .parse()
            .with_context(|| format!("`{s}`: bad integer"))
    };
    let arity = |want: usize| -> Result<()> {
        if args.len() != want {
            bail!("`{s}`: expected {want} argument(s)");
        }
        Ok(())
    };
    let spec = match name {
        "gnp" => {
            arity(2)?;
            let p = args[1].parse().with_context(|| format!("`{s}`: bad probability"))?;
            GraphSpec::Gnp { n: int(0)?, p }
        }
        "random-regular" | "rr" => {
            arity(2)?;
            GraphSpec::RandomRegular { n: int(0)?, d: int(1)? }
        }
        "grid" => {
            arity(2)?;
            GraphSpec::Grid { rows: int(0)?, cols: int(1)? }
        }
        "complete" => GraphSpec::Complete { n: int(0)? },
        "tree" => GraphSpec::Tree { n: int(0)? },
        "cycle" => GraphSpec::Cycle { n: int(0)? },
        "star" => GraphSpec::Star { n: int(0)? },
        "path" => GraphSpec::Path { n: int(0)? },
        other => bail!("unknown graph family `{other}`"),
    };
    if !matches!(spec, GraphSpec::Gnp { .. } | GraphSpec::RandomRegular { .. } | GraphSpec::Grid { .. }) {
        arity(1)?;
    }
    Ok(spec)
}

/// `unit` or `uniform:LO:HI`.
pub fn parse_weights(text: &str) -> Result<WeightSpec> {
    let s = text.trim();
    if s == "unit" {
        return Ok(WeightSpec::Unit);
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["uniform", lo, hi] => Ok(WeightSpec::Uniform { lo: lo.parse()?, hi: hi.parse()? }),
        _ => bail!("weights `{s}` should be `unit` or `uniform:LO:HI`"),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(parse_graph_spec("gnp(24, 0.3)").unwrap(), GraphSpec::Gnp { n: 24, p: 0.3 });
        assert_eq!(parse_graph_spec("grid(6x6)").unwrap(), GraphSpec::Grid { rows: 6, cols: 6 });
        assert_eq!(parse_graph_spec("K_15").unwrap(), GraphSpec::Complete { n: 15 });
        assert_eq!(parse_graph_spec("C_20").unwrap(), GraphSpec::Cycle { n: 20 });
        assert_eq!(parse_graph_spec("rr(30,6)").unwrap(), GraphSpec::RandomRegular { n: 30, d: 6 });
        assert!(parse_graph_spec("tree(3,4)").is_err());
        assert!(parse_graph_spec("blob(3)").is_err());
        assert!(parse_graph_spec("gnp(3").is_err());
        assert_eq!(parse_weights("uniform:1:9").unwrap(), WeightSpec::Uniform { lo: 1, hi: 9 });
        assert!(parse_weights("heavy").is_err());
    }
}
