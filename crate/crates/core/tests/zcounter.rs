mod common;

use std::collections::{HashSet, VecDeque};

use ocspath::generators::{example1, random_zocs};
use ocspath::ocs::{fasten, validate_path};
use ocspath::oracle::oracle_z_shortest;
use ocspath::reach::shortest_path;
use ocspath::zcounter::{augmented, negate, signed_projection, z_fire, z_length_bound, Sign};
use ocspath::{z_shortest_path, Config, Guard, Transition, ZConfig, ZGuard, ZOcs, ZPath, ZTransition};

fn names(n: usize) -> Vec<String> {
    ocspath::ocs::default_names(n)
}

#[test]
fn negation_of_zero_effect_system() {
    let z = ZOcs::new(names(2), [ZTransition::new(0, 0, 1, ZGuard::Positive), ZTransition::new(1, 0, 0, ZGuard::Zero)])
        .unwrap();
    let neg = negate(&z);
    assert_eq!(
        neg.transitions(),
        &[ZTransition::new(0, 0, 1, ZGuard::Negative), ZTransition::new(1, 0, 0, ZGuard::Zero)]
    );
    for seed in 0..50 {
        let z = random_zocs(5, 0.2, seed).unwrap();
        assert_eq!(negate(&negate(&z)), z);
    }
}

#[test]
fn walks_and_their_negations() {
    let mut rng = common::rng(5);
    for seed in 0..200u64 {
        let z = random_zocs(5, 0.25, seed).unwrap();
        let neg = negate(&z);
        let start = ZConfig::new((seed % 5) as usize, (seed % 7) as i64 - 3);
        let steps = common::random_zwalk(&z, start, 40, &mut rng);
        let path = ZPath::fasten(start, &steps).unwrap();
        assert!(path.is_valid_in(&z));
        assert!(path.negated().is_valid_in(&neg));
        // A walk of the negated system maps back the same way.
        let steps = common::random_zwalk(&neg, start, 40, &mut rng);
        let path = ZPath::fasten(start, &steps).unwrap();
        assert!(path.negated().is_valid_in(&z));
    }
}

#[test]
fn signed_projections_correspond_to_sign_restricted_walks() {
    let no_zero = ZOcs::new(names(2), [ZTransition::new(0, 1, 1, ZGuard::Positive)]).unwrap();
    assert_eq!(signed_projection(&no_zero, Sign::Plus).zero_tests().count(), 0);

    let mut rng = common::rng(6);
    let mut checked = 0;
    for seed in 0..400u64 {
        let z = random_zocs(5, 0.25, seed).unwrap();
        let plus = signed_projection(&z, Sign::Plus);
        let minus = signed_projection(&z, Sign::Minus);
        let start = ZConfig::new((seed % 5) as usize, (seed % 4) as i64);
        let steps = common::random_zwalk(&z, start, 30, &mut rng);
        let path = ZPath::fasten(start, &steps).unwrap();
        let nonneg = path.configs().iter().all(|c| c.counter >= 0);
        let plain = common::to_plain(&path).and_then(|(c, s)| fasten(c, &s).ok());
        let valid_plus = plain.is_some_and(|p| validate_path(&plus, &p).is_ok());
        assert_eq!(valid_plus, nonneg, "seed {seed}");

        let nonpos = path.configs().iter().all(|c| c.counter <= 0);
        let plain = common::to_plain(&path.negated()).and_then(|(c, s)| fasten(c, &s).ok());
        let valid_minus = plain.is_some_and(|p| validate_path(&minus, &p).is_ok());
        assert_eq!(valid_minus, nonpos, "seed {seed}");

        // Paths of the projection run unchanged in the integer system.
        let walk = common::random_path(&plus, Config::new(start.state, start.counter as u64), 30, &mut rng);
        let zsteps: Vec<ZTransition> = walk
            .steps()
            .iter()
            .map(|t| {
                let g = if t.guard == Guard::Zero { ZGuard::Zero } else { ZGuard::Positive };
                ZTransition::new(t.src, t.eff, t.dst, g)
            })
            .collect();
        assert!(ZPath::fasten(start, &zsteps).is_some_and(|p| p.is_valid_in(&z)));
        checked += 1;
    }
    assert!(checked >= 200);
}

#[test]
fn augmentation_examples() {
    let z =
        ZOcs::new(names(3), [ZTransition::new(0, 1, 1, ZGuard::Zero), ZTransition::new(1, -1, 2, ZGuard::Positive)])
            .unwrap();
    assert_eq!(augmented(&z, Sign::Plus).unwrap(), signed_projection(&z, Sign::Plus));

    // q -(=0, -1)-> r -(<0, +1)-> q' is usable only below zero.
    let dip =
        ZOcs::new(names(3), [ZTransition::new(0, -1, 1, ZGuard::Zero), ZTransition::new(1, 1, 2, ZGuard::Negative)])
            .unwrap();
    let aug = augmented(&dip, Sign::Plus).unwrap();
    assert!(aug.contains(&Transition::zero_test(0, 0, 2)));
    assert_eq!(aug.zero_tests().count(), 1);
}

/// Pairs `(q, q')` joined by a walk `(q, 0) -> (q', 0)` of length at least
/// two with every intermediate counter negative.
fn sub_zero_pairs(z: &ZOcs, counter_limit: i64, depth: usize) -> HashSet<(usize, usize)> {
    let mut out = HashSet::new();
    for q in 0..z.n() {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        for t in z.enabled(ZConfig::new(q, 0)) {
            let c = z_fire(ZConfig::new(q, 0), t).unwrap();
            if c.counter < 0 && seen.insert(c) {
                queue.push_back((c, 1));
            }
        }
        while let Some((c, d)) = queue.pop_front() {
            if d >= depth {
                continue;
            }
            for t in z.enabled(c) {
                let s = z_fire(c, t).unwrap();
                if s.counter == 0 {
                    out.insert((q, s.state));
                } else if s.counter < 0 && s.counter >= -counter_limit && seen.insert(s) {
                    queue.push_back((s, d + 1));
                }
            }
        }
    }
    out
}

#[test]
fn augmentation_matches_enumeration() {
    for seed in 0..300u64 {
        let n = 2 + (seed % 5) as usize;
        let z = random_zocs(n, 0.15, seed).unwrap();
        let aug = augmented(&z, Sign::Plus).unwrap();
        let base: HashSet<Transition> = signed_projection(&z, Sign::Plus).transitions().iter().copied().collect();
        let synthesized: HashSet<(usize, usize)> =
            aug.transitions().iter().filter(|t| !base.contains(t)).map(|t| (t.src, t.dst)).collect();
        let expected: HashSet<(usize, usize)> = sub_zero_pairs(&z, 20, 40)
            .into_iter()
            .filter(|&(q, q2)| !base.contains(&Transition::zero_test(q, 0, q2)))
            .collect();
        assert_eq!(synthesized, expected, "seed {seed}");
    }
}

#[test]
fn integer_paths_of_an_embedded_system() {
    for n in 2..=6 {
        let e = example1(n).unwrap();
        let z = ZOcs::from_ocs(&e.ocs);
        let za = ZConfig::new(e.source.state, 0);
        let zb = ZConfig::new(e.target.state, 0);
        let zp = z_shortest_path(&z, za, zb).unwrap().unwrap();
        let p = shortest_path(&e.ocs, e.source, e.target).unwrap().unwrap();
        assert_eq!(zp.len(), p.len());
        assert!(zp.is_valid_in(&z));
        assert_eq!(z_shortest_path(&z, za, za).unwrap().unwrap().len(), 0);
    }
}

#[test]
fn integer_paths_match_oracle() {
    for seed in 0..150u64 {
        let n = 2 + (seed % 5) as usize;
        let z = random_zocs(n, 0.12, seed).unwrap();
        let ca = (seed % 9) as i64 - 4;
        let cb = ((seed / 9) % 9) as i64 - 4;
        let bound = z_length_bound(n, ca, cb).unwrap() as i64;
        for p in 0..n {
            for q in 0..n {
                let (a, b) = (ZConfig::new(p, ca), ZConfig::new(q, cb));
                let got = z_shortest_path(&z, a, b).unwrap();
                if let Some(path) = &got {
                    assert!(path.is_valid_in(&z) && path.src() == a && path.targ() == b);
                    assert!(path.len() as i64 <= bound);
                }
                let expected = oracle_z_shortest(&z, a, b, 2 * bound, 2 * bound as usize);
                assert_eq!(got.map(|p| p.len()), expected, "seed {seed}, {a} -> {b}");
            }
        }
    }
}
