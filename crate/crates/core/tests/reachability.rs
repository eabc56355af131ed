mod common;

use std::collections::{HashSet, VecDeque};

use ocspath::generators::{example1, example2, random_ocs};
use ocspath::ocs::{fire, validate_path};
use ocspath::oracle::{oracle_min_zero, oracle_shortest_path};
use ocspath::reach::{build_lifted, min_zero_path, shortest_low_arc, shortest_path, zero_bound};
use ocspath::{Config, Ocs, Transition};

#[test]
fn example_lengths() {
    let e = example1(2).unwrap();
    let p = shortest_path(&e.ocs, e.source, e.target).unwrap().unwrap();
    assert_eq!(p.len(), 4);
    assert!(validate_path(&e.ocs, &p).is_ok());
    assert_eq!(shortest_path(&e.ocs, e.source, e.source).unwrap().unwrap().len(), 0);

    let e = example2(3, 2).unwrap();
    assert_eq!(shortest_path(&e.ocs, e.source, e.target).unwrap().unwrap().len(), 14);
}

#[test]
fn example2_has_one_intermediate_zero() {
    let e = example2(3, 2).unwrap();
    let p = min_zero_path(&e.ocs, e.source, e.target).unwrap().unwrap();
    assert_eq!(p.intermediate_zeros(), 1);
    let s1 = e.ocs.state_index("s_1").unwrap();
    assert!(p.configs()[1..p.len()].contains(&Config::new(s1, 0)));
    assert_eq!(oracle_min_zero(&e.ocs, e.source, e.target, 50), Some((1, 14)));
}

#[test]
fn arc_connected_pair_has_no_zero() {
    let e = example1(3).unwrap();
    let p = min_zero_path(&e.ocs, e.source, e.target).unwrap().unwrap();
    assert_eq!((p.intermediate_zeros(), p.len()), (0, 9));
}

#[test]
fn low_arcs() {
    let e = example1(2).unwrap();
    let arc = shortest_low_arc(&e.ocs, e.source, e.target).unwrap().unwrap();
    assert_eq!(arc.len(), 4);
    assert!(arc.is_arc() && arc.max_counter() == 1);

    // 5n = 60 <= km = 156
    let e = example2(13, 12).unwrap();
    let s1 = e.ocs.state_index("s_1").unwrap();
    assert!(shortest_low_arc(&e.ocs, e.source, Config::new(s1, 0)).unwrap().is_none());
    assert!(shortest_path(&e.ocs, e.source, Config::new(s1, 0)).unwrap().is_some());
}

/// Shortest arc from `alpha` to `beta` with all counters below `bound`,
/// by plain BFS over positive configurations.
fn low_arc_oracle(ocs: &Ocs, alpha: Config, beta: Config, bound: u64) -> Option<usize> {
    if alpha == beta {
        return Some(0);
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(alpha, 0usize)]);
    while let Some((c, d)) = queue.pop_front() {
        for t in ocs.transitions() {
            let Ok(s) = fire(c, t) else { continue };
            if s == beta {
                return Some(d + 1);
            }
            if s.counter > 0 && s.counter < bound && seen.insert(s) {
                queue.push_back((s, d + 1));
            }
        }
    }
    None
}

#[test]
fn low_arcs_match_oracle() {
    for seed in 0..150u64 {
        let n = 2 + (seed % 5) as usize;
        let ocs = random_ocs(n, 0.3, 0.15, seed).unwrap();
        for p in 0..n {
            for q in 0..n {
                let (a, b) = (Config::new(p, 0), Config::new(q, 0));
                let got = shortest_low_arc(&ocs, a, b).unwrap();
                if let Some(arc) = &got {
                    assert!(validate_path(&ocs, arc).is_ok() && arc.is_arc());
                    assert!(arc.is_below(5 * n as u64));
                }
                assert_eq!(got.map(|p| p.len()), low_arc_oracle(&ocs, a, b, 5 * n as u64), "seed {seed}");
            }
        }
    }
}

#[test]
fn shortest_and_zero_minimal_paths_match_oracle() {
    for seed in 0..120u64 {
        let n = 2 + (seed % 7) as usize;
        let ocs = random_ocs(n, [0.1, 0.3, 0.6][(seed % 3) as usize], 0.2, seed).unwrap();
        let cap = 3 * zero_bound(n).unwrap();
        for p in 0..n {
            for q in 0..n {
                let (a, b) = (Config::new(p, 0), Config::new(q, 0));
                let got = shortest_path(&ocs, a, b).unwrap();
                assert_eq!(got.map(|p| p.len()), oracle_shortest_path(&ocs, a, b, cap, cap as usize), "seed {seed}");
                let mz = min_zero_path(&ocs, a, b).unwrap();
                if let Some(path) = &mz {
                    assert!(validate_path(&ocs, path).is_ok());
                }
                assert_eq!(
                    mz.map(|p| (p.intermediate_zeros(), p.len())),
                    oracle_min_zero(&ocs, a, b, cap),
                    "seed {seed}"
                );
            }
        }
    }
}

#[test]
fn lifted_example1_at_level_one() {
    let e = example1(2).unwrap();
    let lifted = build_lifted(&e.ocs, 1).unwrap();
    let id = |s: &str| e.ocs.state_index(s).unwrap();
    let mut tests: Vec<Transition> = lifted.zero_tests().copied().collect();
    tests.sort();
    let mut expected =
        vec![Transition::zero_test(id("p_2"), 0, id("q_1")), Transition::zero_test(id("q_1"), 0, id("q_2"))];
    expected.sort();
    assert_eq!(tests, expected);
    assert!(lifted.positive_transitions().eq(e.ocs.positive_transitions()));
}

#[test]
fn lifted_correspondence_up_to_twenty() {
    for seed in 0..60u64 {
        let n = 2 + (seed % 5) as usize;
        let ocs = random_ocs(n, 0.3, 0.3, seed).unwrap();
        for a in 0..=4u64 {
            let lifted = build_lifted(&ocs, a).unwrap();
            for p in 0..n {
                let layers = common::level_layers(&ocs, p, a, 21);
                let mut current: HashSet<Config> = HashSet::from([Config::new(p, 0)]);
                for (k, layer) in layers.iter().enumerate() {
                    let shifted: HashSet<Config> =
                        current.iter().map(|c| Config::new(c.state, c.counter + a)).collect();
                    assert_eq!(&shifted, layer, "seed {seed}, a = {a}, p = {p}, K = {k}");
                    current = current
                        .iter()
                        .flat_map(|&c| lifted.transitions().iter().filter_map(move |t| fire(c, t).ok()))
                        .collect();
                }
            }
        }
    }
}
