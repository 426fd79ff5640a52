use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vft_core::detkit::{beta_hitting_set, hitting_set, part_size, HittingInstance};
use vft_core::error::HittingError;

/// An instance whose every set is exactly as large as admissibility demands,
/// or a bit larger.
fn admissible(rng: &mut ChaCha8Rng, beta: usize) -> HittingInstance {
    let delta = rng.gen_range(1.5..6.0);
    let sets_count = rng.gen_range(1..40);
    let need = beta * part_size(1.0, delta, sets_count * beta);
    let ground_len = need + rng.gen_range(0..3 * need);
    let ground: Vec<u32> = (0..ground_len as u32).map(|x| 3 * x + 1).collect();
    let sets = (0..sets_count)
        .map(|_| {
            let size = rng.gen_range(need..=ground_len.min(need + need / 2));
            let mut s: Vec<u32> = ground.choose_multiple(rng, size).copied().collect();
            s.sort_unstable();
            s
        })
        .collect();
    HittingInstance { ground, sets, delta, beta, c: 1.0 }
}

#[test]
fn contracts_hold_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for beta in [1, 2, 4, 8] {
        for _ in 0..100 {
            let inst = admissible(&mut rng, beta);
            assert_eq!(inst.min_set_size() % beta, 0);
            let r = beta_hitting_set(&inst).unwrap();
            assert!(r.windows(2).all(|w| w[0] < w[1]));
            assert!(r.iter().all(|x| inst.ground.contains(x)));
            assert!(
                r.len() as f64 <= inst.ground.len() as f64 / inst.delta,
                "beta {beta}: {} > {}",
                r.len(),
                inst.ground.len() as f64 / inst.delta
            );
            for set in &inst.sets {
                assert!(set.iter().filter(|x| r.contains(x)).count() >= beta);
            }
            if beta == 1 {
                assert_eq!(hitting_set(&inst).unwrap(), r);
            }
        }
    }
}

#[test]
fn output_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inst = admissible(&mut rng, 3);
    assert_eq!(beta_hitting_set(&inst).unwrap(), beta_hitting_set(&inst.clone()).unwrap());
}

#[test]
fn greedy_is_never_far_from_optimal_on_tiny_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let ground: Vec<u32> = (0..10).collect();
        let sets: Vec<Vec<u32>> =
            (0..rng.gen_range(1..6)).map(|_| ground.choose_multiple(&mut rng, 5).copied().collect()).collect();
        let inst = HittingInstance { ground: ground.clone(), sets: sets.clone(), delta: 1.0, beta: 1, c: 1.0 };
        let r = hitting_set(&inst).unwrap();
        let opt = (0u32..1 << 10)
            .filter(|mask| sets.iter().all(|s| s.iter().any(|&x| mask >> x & 1 == 1)))
            .map(u32::count_ones)
            .min()
            .unwrap() as usize;
        assert!(sets.iter().all(|s| s.iter().any(|x| r.contains(x))));
        // greedy stays within a ln(|sets|) + 1 factor
        assert!(r.len() <= 3 * opt, "{} vs optimum {opt}", r.len());
    }
}

#[test]
fn small_sets_are_rejected() {
    let inst = HittingInstance {
        ground: (0..50).collect(),
        sets: vec![(0..30).collect(), (0..3).collect()],
        delta: 4.0,
        beta: 1,
        c: 1.0,
    };
    match hitting_set(&inst) {
        Err(HittingError::Inadmissible { index, size, needed }) => {
            assert_eq!((index, size), (1, 3));
            assert_eq!(needed, part_size(1.0, 4.0, 2));
        }
        other => panic!("{other:?}"),
    }
    let bad = HittingInstance { delta: 0.5, ..inst.clone() };
    assert!(matches!(hitting_set(&bad), Err(HittingError::Parameter(_))));
    let beta2 = HittingInstance { beta: 2, ..inst };
    assert!(matches!(hitting_set(&beta2), Err(HittingError::Parameter(_))));
}
