use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vft_core::mis::{lex_first_mis, parallel_greedy_mis, random_permutation, PathConflictInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MisBenchConfig {
    pub instances: usize,
    pub seed: u64,
    pub max_paths: usize,
    pub max_vertices: u32,
    pub max_len: usize,
}

impl Default for MisBenchConfig {
    fn default() -> Self {
        MisBenchConfig { instances: 10_000, seed: 0, max_paths: 200, max_vertices: 60, max_len: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisRow {
    pub instance: usize,
    pub paths: usize,
    pub vertices: u32,
    pub total_len: usize,
    pub rounds: usize,
    pub work: usize,
    pub mis: usize,
    pub agrees: bool,
}

impl MisRow {
    /// `rounds / log2(paths)^2`, with the log clamped at 1.
    pub fn ratio(&self) -> f64 {
        let l = (self.paths as f64).log2().max(1.0);
        self.rounds as f64 / (l * l)
    }
}

/// Random simple paths over a small vertex pool, with a seeded permutation.
pub fn random_instance(rng: &mut ChaCha8Rng, cfg: &MisBenchConfig, perm_seed: u64) -> (PathConflictInstance, u32) {
    let count = rng.gen_range(1..=cfg.max_paths);
    let vertices = rng.gen_range(2..=cfg.max_vertices.max(2));
    let paths: Vec<Vec<u32>> = (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=cfg.max_len.min(vertices as usize));
            let mut p: Vec<u32> = Vec::with_capacity(len);
            while p.len() < len {
                let x = rng.gen_range(0..vertices);
                if !p.contains(&x) {
                    p.push(x);
                }
            }
            p
        })
        .collect();
    (PathConflictInstance::new(paths, random_permutation(count, perm_seed)), vertices)
}

pub fn run_mis_bench(cfg: &MisBenchConfig) -> Vec<MisRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.instances)
        .map(|i| {
            let (inst, vertices) = random_instance(&mut rng, cfg, cfg.seed.wrapping_add(i as u64));
            let (got, trace) = parallel_greedy_mis(&inst);
            MisRow {
                instance: i,
                paths: inst.len(),
                vertices,
                total_len: inst.paths.iter().map(Vec::len).sum(),
                rounds: trace.rounds,
                work: trace.work,
                mis: got.len(),
                agrees: got == lex_first_mis(&inst),
            }
        })
        .collect()
}

pub fn mis_tsv(rows: &[MisRow]) -> String {
    let mut out = String::from("instance\tpaths\tvertices\ttotal_len\trounds\twork\tmis\tagrees\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.instance, r.paths, r.vertices, r.total_len, r.rounds, r.work, r.mis, r.agrees
        ));
    }
    out
}
