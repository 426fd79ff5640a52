use proptest::prelude::*;
use vft_core::generate::{generate, GraphSpec, WeightSpec};
use vft_core::graph::{EdgeSet, FaultSet, Graph};
use vft_core::mis::{lex_first_mis, parallel_greedy_mis, random_permutation, PathConflictInstance};
use vft_core::shortest::dist;
use vft_core::verify::{verify_spanner, Mode, VerifyOptions};

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..14, 0.1f64..0.9, 1u64..20, any::<u64>()).prop_map(|(n, p, hi, seed)| {
        generate(&GraphSpec::Gnp { n, p }, WeightSpec::Uniform { lo: 1, hi }, seed).unwrap()
    })
}

fn conflict_instance() -> impl Strategy<Value = PathConflictInstance> {
    (prop::collection::vec(prop::collection::btree_set(0u32..30, 1..6), 0..40), any::<u64>()).prop_map(
        |(sets, seed)| {
            let paths: Vec<Vec<u32>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            let rank = random_permutation(paths.len(), seed);
            PathConflictInstance::new(paths, rank)
        },
    )
}

/// Greedy scan written directly from the definition.
fn scan(inst: &PathConflictInstance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.paths.len()).collect();
    order.sort_by_key(|&p| inst.rank[p]);
    let mut chosen: Vec<usize> = Vec::new();
    for p in order {
        if chosen.iter().all(|&q| inst.paths[q].iter().all(|x| !inst.paths[p].contains(x))) {
            chosen.push(p);
        }
    }
    chosen.sort_unstable();
    chosen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distance_is_symmetric(g in small_graph(), a in 0u32..14, b in 0u32..14) {
        let (a, b) = (a % g.n() as u32, b % g.n() as u32);
        let none = FaultSet::empty();
        prop_assert_eq!(dist(&g, a, b, &none).unwrap(), dist(&g, b, a, &none).unwrap());
    }

    #[test]
    fn faults_never_shorten_distances(g in small_graph(), a in 0u32..14, b in 0u32..14, x in 0u32..14, y in 0u32..14) {
        let n = g.n() as u32;
        let (a, b, x, y) = (a % n, b % n, x % n, y % n);
        prop_assume!(![a, b].contains(&x) && ![a, b].contains(&y));
        let d0 = dist(&g, a, b, &FaultSet::empty()).unwrap();
        let d1 = dist(&g, a, b, &FaultSet::new(vec![x])).unwrap();
        let d2 = dist(&g, a, b, &FaultSet::new(vec![x, y])).unwrap();
        let key = |d: Option<u64>| d.unwrap_or(u64::MAX);
        prop_assert!(key(d0) <= key(d1) && key(d1) <= key(d2));
    }

    #[test]
    fn parallel_mis_is_the_scan(inst in conflict_instance()) {
        let (got, trace) = parallel_greedy_mis(&inst);
        let want = scan(&inst);
        prop_assert_eq!(&got, &want);
        prop_assert_eq!(lex_first_mis(&inst), want);
        prop_assert_eq!(trace.accepted.iter().map(Vec::len).sum::<usize>(), got.len());
        prop_assert_eq!(trace.rounds >= 1, !inst.paths.is_empty());
    }

    #[test]
    fn mis_of_a_rank_prefix_is_a_prefix(inst in conflict_instance(), cut in 0usize..40) {
        // the paths ranked below `cut` are decided by themselves alone
        let cut = cut.min(inst.paths.len());
        let keep: Vec<usize> = (0..inst.paths.len()).filter(|&p| (inst.rank[p] as usize) < cut).collect();
        let sub = PathConflictInstance::new(
            keep.iter().map(|&p| inst.paths[p].clone()).collect(),
            keep.iter().map(|&p| inst.rank[p]).collect(),
        );
        let (full, _) = parallel_greedy_mis(&inst);
        let (part, _) = parallel_greedy_mis(&sub);
        let mapped: Vec<usize> = part.into_iter().map(|j| keep[j]).collect();
        let restricted: Vec<usize> = full.into_iter().filter(|p| keep.contains(p)).collect();
        prop_assert_eq!(mapped, restricted);
    }

    #[test]
    fn adding_edges_keeps_a_spanner_valid(g in small_graph(), seed in any::<u64>(), extra in any::<u64>()) {
        prop_assume!(g.m() > 0);
        let pick = |s: u64| EdgeSet::from_ids(g.m(), (0..g.m() as u32).filter(|&e| (s.rotate_left(e % 64) ^ u64::from(e)) & 1 == 1));
        let h = pick(seed);
        let mut bigger = h.clone();
        for e in pick(extra).iter() {
            bigger.insert(e);
        }
        for (f, k) in [(0, 1), (1, 2), (2, 2)] {
            let small = verify_spanner(&g, &h, f, k, Mode::Exhaustive, VerifyOptions::default()).unwrap();
            let large = verify_spanner(&g, &bigger, f, k, Mode::Exhaustive, VerifyOptions::default()).unwrap();
            prop_assert!(!small.pass || large.pass);
        }
        let full = EdgeSet::full(g.m());
        prop_assert!(verify_spanner(&g, &full, 2, 1, Mode::Exhaustive, VerifyOptions::default()).unwrap().pass);
    }
}
