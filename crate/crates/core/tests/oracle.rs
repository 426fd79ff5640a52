//! The verifier against a brute force written from the definition: all-pairs
//! Floyd-Warshall after deleting every fault set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vft_core::generate::{generate, GraphSpec, WeightSpec};
use vft_core::graph::{EdgeSet, FaultSet, Graph};
use vft_core::shortest::dist;
use vft_core::verify::{is_protected, verify_certificate, verify_spanner, Mode, VerifyOptions, DEFAULT_CAP};

const INF: u64 = u64::MAX / 4;

fn floyd(n: usize, edges: &[(usize, usize, u64)], dead: &[bool]) -> Vec<Vec<u64>> {
    let mut d = vec![vec![INF; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0;
    }
    for &(a, b, w) in edges {
        if !dead[a] && !dead[b] {
            d[a][b] = d[a][b].min(w);
            d[b][a] = d[b][a].min(w);
        }
    }
    for m in 0..n {
        if dead[m] {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                if d[a][m] + d[m][b] < d[a][b] {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
    d
}

fn fault_sets(n: usize, f: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize <= f {
            out.push((0..n).filter(|&x| mask >> x & 1 == 1).collect());
        }
    }
    out
}

struct Instance {
    n: usize,
    g: Vec<(usize, usize, u64)>,
    h: Vec<bool>,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(3..=7);
    let p = rng.gen_range(0.3..0.9);
    let weighted = rng.gen_bool(0.5);
    let mut g = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.push((a, b, if weighted { rng.gen_range(1..=6) } else { 1 }));
            }
        }
    }
    let keep = rng.gen_range(0.4..1.0);
    let h = g.iter().map(|_| rng.gen_bool(keep)).collect();
    Instance { n, g, h }
}

fn to_graph(inst: &Instance) -> (Graph, EdgeSet) {
    let triples: Vec<(u32, u32, u64)> = inst.g.iter().map(|&(a, b, w)| (a as u32, b as u32, w)).collect();
    let g = Graph::from_edges(inst.n, &triples).unwrap();
    // edge ids follow input order
    let h = EdgeSet::from_ids(g.m(), inst.h.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32));
    (g, h)
}

/// Every pair stays within `stretch` times its distance after every fault set.
fn brute_spanner(inst: &Instance, f: usize, stretch: u64) -> bool {
    let hedges: Vec<_> = inst.g.iter().zip(&inst.h).filter(|(_, &b)| b).map(|(e, _)| *e).collect();
    for faults in fault_sets(inst.n, f) {
        let mut dead = vec![false; inst.n];
        for &x in &faults {
            dead[x] = true;
        }
        let dg = floyd(inst.n, &inst.g, &dead);
        let dh = floyd(inst.n, &hedges, &dead);
        for a in 0..inst.n {
            for b in 0..inst.n {
                if dead[a] || dead[b] || dg[a][b] >= INF {
                    continue;
                }
                if dh[a][b] >= INF || dh[a][b] > stretch * dg[a][b] {
                    return false;
                }
            }
        }
    }
    true
}

fn brute_protected(inst: &Instance, e: usize, f: usize, stretch: u64) -> bool {
    let (u, v, w) = inst.g[e];
    let hedges: Vec<_> = inst.g.iter().zip(&inst.h).filter(|(_, &b)| b).map(|(e, _)| *e).collect();
    fault_sets(inst.n, f).into_iter().filter(|fs| !fs.contains(&u) && !fs.contains(&v)).all(|faults| {
        let mut dead = vec![false; inst.n];
        for &x in &faults {
            dead[x] = true;
        }
        floyd(inst.n, &hedges, &dead)[u][v] <= stretch * w
    })
}

fn brute_certificate(inst: &Instance, lambda: usize) -> bool {
    let hedges: Vec<_> = inst.g.iter().zip(&inst.h).filter(|(_, &b)| b).map(|(e, _)| *e).collect();
    fault_sets(inst.n, lambda - 1).into_iter().all(|faults| {
        let mut dead = vec![false; inst.n];
        for &x in &faults {
            dead[x] = true;
        }
        let dg = floyd(inst.n, &inst.g, &dead);
        let dh = floyd(inst.n, &hedges, &dead);
        (0..inst.n).all(|a| (0..inst.n).all(|b| (dg[a][b] >= INF) == (dh[a][b] >= INF)))
    })
}

#[test]
fn verifier_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut passes = 0;
    for _ in 0..1000 {
        let inst = random_instance(&mut rng);
        let (g, h) = to_graph(&inst);
        let f = rng.gen_range(0..=2);
        let k = rng.gen_range(1..=3);
        let stretch = 2 * k as u64 - 1;
        let rep = verify_spanner(&g, &h, f, k, Mode::Exhaustive, VerifyOptions::default()).unwrap();
        let expected = brute_spanner(&inst, f, stretch);
        assert_eq!(rep.pass, expected, "n={} f={f} k={k} g={:?} h={:?}", inst.n, inst.g, inst.h);
        assert_eq!(rep.pass, rep.violations.is_empty());
        passes += usize::from(expected);
        if !inst.g.is_empty() {
            let e = rng.gen_range(0..inst.g.len());
            let got = is_protected(&g, &h, e as u32, f, k, DEFAULT_CAP).unwrap();
            assert_eq!(got, brute_protected(&inst, e, f, stretch));
        }
    }
    // both outcomes occur
    assert!(passes > 50 && passes < 950, "{passes}");
}

#[test]
fn certificate_check_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..400 {
        let inst = random_instance(&mut rng);
        let (g, h) = to_graph(&inst);
        let lambda = rng.gen_range(1..=3);
        let rep = verify_certificate(&g, &h, lambda, 100, VerifyOptions::default()).unwrap();
        assert_eq!(rep.mode, Mode::Exhaustive);
        assert_eq!(rep.pass, brute_certificate(&inst, lambda));
        for w in &rep.violations {
            assert!(w.u != w.v && !w.faults.contains(&w.u) && !w.faults.contains(&w.v));
        }
    }
}

#[test]
fn reported_violations_are_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    for _ in 0..300 {
        let inst = random_instance(&mut rng);
        let (g, h) = to_graph(&inst);
        let rep = verify_spanner(&g, &h, 1, 2, Mode::Exhaustive, VerifyOptions::default()).unwrap();
        for v in &rep.violations {
            seen += 1;
            let faults = FaultSet::new(v.faults.clone());
            let in_g = dist(&g, v.u, v.v, &faults).unwrap().expect("connected in g");
            let sub = g.restrict(&h.to_vec());
            let in_h = dist(&sub, v.u, v.v, &faults).unwrap();
            assert_eq!(in_h, v.dist);
            assert!(in_h.is_none_or(|d| d > 3 * in_g));
        }
    }
    assert!(seen > 0);
}

#[test]
fn dijkstra_matches_floyd() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..40 {
        let n = rng.gen_range(2..20);
        let g = generate(&GraphSpec::Gnp { n, p: 0.3 }, WeightSpec::Uniform { lo: 1, hi: 9 }, seed).unwrap();
        let edges: Vec<_> = g.edges().iter().map(|e| (e.u as usize, e.v as usize, e.w)).collect();
        let x = rng.gen_range(0..n) as u32;
        let mut dead = vec![false; n];
        dead[x as usize] = true;
        let d = floyd(n, &edges, &dead);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if a == x || b == x {
                    continue;
                }
                let got = dist(&g, a, b, &FaultSet::new(vec![x])).unwrap();
                let want = (d[a as usize][b as usize] < INF).then_some(d[a as usize][b as usize]);
                assert_eq!(got, want);
            }
        }
    }
}
