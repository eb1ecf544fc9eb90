use std::collections::BTreeSet;

use hetpack::construct::{levels, run_sweep_inspect, run_sweep_serial};
use hetpack::model::{dominates, Instance, ObjectiveVector};
use hetpack::{instances, oracle, run_sweep, Heuristic, ItemOrder, Step, SweepParams};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn key(v: &ObjectiveVector) -> (u32, u64, u64) {
    (v.z1(), *v.z2().numer(), *v.z2().denom())
}

/// Front over labeled assignments (item -> bin index), computed from scratch.
fn labeled_front(instance: &Instance) -> BTreeSet<(u32, u64, u64)> {
    let n = instance.len();
    let mut seen = BTreeSet::new();
    let mut assignment = vec![0usize; n];
    loop {
        let mut loads = vec![0u64; n];
        let mut labels: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); n];
        for (id, &bin) in assignment.iter().enumerate() {
            loads[bin] += instance.item(id).weight;
            labels[bin].insert(instance.label(instance.item(id).attribute));
        }
        if loads.iter().all(|&l| l <= instance.capacity()) {
            let used = loads.iter().filter(|&&l| l > 0).count() as u32;
            let total: usize = labels.iter().map(BTreeSet::len).sum();
            seen.insert((used, total as u64));
        }
        // next assignment in base n
        let mut pos = 0;
        loop {
            if pos == n {
                let vectors: Vec<ObjectiveVector> = seen.iter().map(|&(b, t)| ObjectiveVector::new(b, t)).collect();
                return vectors
                    .iter()
                    .filter(|v| !vectors.iter().any(|w| dominates(w, v)))
                    .map(key)
                    .collect();
            }
            assignment[pos] += 1;
            if assignment[pos] < n {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn oracle_matches_labeled_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let labels = ["A", "B", "C"];
    for _ in 0..6 {
        let items: Vec<(u64, &str)> =
            (0..7).map(|_| (rng.gen_range(10..=60), labels[rng.gen_range(0..3)])).collect();
        let instance = Instance::new(100, &items).unwrap();
        let exact: BTreeSet<_> = oracle::exact_pareto(&instance).unwrap().vectors().map(|v| key(&v)).collect();
        assert_eq!(exact, labeled_front(&instance), "{items:?}");
    }
}

#[test]
fn hand_enumerated_three_item_scenario() {
    // Item 0 (A) and item 1 (B) fit together, item 2 (B) joins either.
    let instance = Instance::new(10, &[(5, "A"), (3, "B"), (2, "B")]).unwrap();
    let exact = oracle::exact_pareto(&instance).unwrap().sorted_vectors();
    assert_eq!(exact, [ObjectiveVector::new(2, 2), ObjectiveVector::new(1, 2)]);
    // At level 1 the B items pair up next to the A bin.
    let params = SweepParams::new(Heuristic::BestFit, ItemOrder::DecreasingWeight, 3);
    let archive = run_sweep(&instance, &params).unwrap();
    assert_eq!(archive.sorted_vectors(), exact);
}

#[test]
fn parallel_and_serial_sweeps_agree() {
    let instance = instances::generate(60, 4).unwrap();
    for heuristic in Heuristic::ALL {
        for order in ItemOrder::ALL {
            let mut params = SweepParams::new(heuristic, order, 77);
            params.solutions_per_level = 20;
            let parallel = rayon::ThreadPoolBuilder::new()
                .num_threads(4)
                .build()
                .unwrap()
                .install(|| run_sweep(&instance, &params).unwrap());
            let serial = run_sweep_serial(&instance, &params).unwrap();
            assert_eq!(parallel.entries(), serial.entries());
        }
    }
}

#[test]
fn level_count_matches_closed_form() {
    for (top, step, expected) in [(5u32, "0.1", 41usize), (5, "0.3", 14), (3, "0.25", 9), (2, "1", 2), (4, "1/3", 10)] {
        let step: Step = step.parse().unwrap();
        let closed = ((Ratio::from_integer(u64::from(top) - 1) / step.ratio()).to_integer() + 1) as usize;
        assert_eq!(levels(top, step).len(), closed);
        assert_eq!(closed, expected);
    }
}

#[test]
fn benchmark_sweep_contains_homogeneous_extreme() {
    let instance = instances::generate(100, 7).unwrap();
    let params = SweepParams::new(Heuristic::BestFit, ItemOrder::DecreasingWeight, 1);
    let count = std::sync::atomic::AtomicUsize::new(0);
    let archive = run_sweep_inspect(&instance, &params, |s, _| {
        assert!(s.validate(&instance).is_ok());
        count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    })
    .unwrap();
    assert_eq!(count.into_inner(), 100 * levels(instance.max_heterogeneity(), params.step).len());
    let vectors = archive.sorted_vectors();
    assert!(vectors.iter().any(|v| v.z2() == Ratio::from_integer(1)));
    for a in &vectors {
        for b in &vectors {
            assert!(!dominates(a, b));
        }
    }
}

#[test]
fn sweep_is_reproducible() {
    let instance = instances::generate(100, 2).unwrap();
    let params = SweepParams::new(Heuristic::RandomFit, ItemOrder::RandomOrder, 5);
    let a = run_sweep(&instance, &params).unwrap();
    let b = run_sweep(&instance, &params).unwrap();
    assert_eq!(a.entries(), b.entries());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn heuristic_front_never_beats_exact_front(
        items in proptest::collection::vec((10u64..=60, 0usize..3), 1..=7),
        seed in any::<u64>(),
        random_fit in any::<bool>(),
    ) {
        let labels = ["A", "B", "C"];
        let items: Vec<(u64, &str)> = items.into_iter().map(|(w, a)| (w, labels[a])).collect();
        let instance = Instance::new(100, &items).unwrap();
        let exact = oracle::exact_pareto(&instance).unwrap();
        let heuristic = if random_fit { Heuristic::RandomFit } else { Heuristic::BestFit };
        let mut params = SweepParams::new(heuristic, ItemOrder::RandomOrder, seed);
        params.solutions_per_level = 10;
        let approx = run_sweep(&instance, &params).unwrap();
        for v in approx.vectors() {
            prop_assert!(exact.vectors().any(|e| e == v || dominates(&e, &v)));
        }
    }
}
