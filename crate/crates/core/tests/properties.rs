mod common;

use num_integer::Integer;
use ocspath::generators::{random_ocs, random_zocs};
use ocspath::normalize::{choose_ab, normalize_path, unpump_mod_gcd};
use ocspath::ocs::{fasten, remove_repeats, validate_path};
use ocspath::oracle::oracle_shortest_path;
use ocspath::reach::{shortest_path, zero_bound};
use ocspath::zcounter::negate;
use ocspath::{Config, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fasten_inverts_projection(seed in any::<u64>(), n in 1usize..7, c in 0u64..5, len in 0usize..60) {
        let ocs = random_ocs(n, 0.35, 0.35, seed).unwrap();
        let mut rng = common::rng(seed);
        let walk = common::random_path(&ocs, Config::new(0, c), len, &mut rng);
        prop_assert_eq!(fasten(walk.src(), walk.steps()).unwrap(), walk.clone());
        prop_assert!(validate_path(&ocs, &walk).is_ok());
    }

    #[test]
    fn remove_repeats_invariants(seed in any::<u64>(), n in 1usize..7, len in 0usize..200) {
        let ocs = random_ocs(n, 0.4, 0.4, seed).unwrap();
        let mut rng = common::rng(seed ^ 0x5555);
        let walk = common::random_path(&ocs, Config::new(0, 0), len, &mut rng);
        let trimmed = remove_repeats(&walk);
        prop_assert!(validate_path(&ocs, &trimmed).is_ok());
        prop_assert_eq!((trimmed.src(), trimmed.targ()), (walk.src(), walk.targ()));
        prop_assert!(trimmed.len() <= walk.len());
        prop_assert!(trimmed.intermediate_zeros() <= walk.intermediate_zeros());
        let mut seen = std::collections::HashSet::new();
        prop_assert!(trimmed.configs().iter().all(|c| seen.insert(*c)));
    }

    #[test]
    fn choose_ab_meets_its_postcondition(big_a in 1u64..60, big_b in 1u64..60, l in 0u64..500, r in any::<i64>()) {
        let g = big_a.gcd(&big_b) as i64;
        let span = (l + big_a.lcm(&big_b)) as i64 / g;
        let k = r.mod_floor(&(2 * span + 1)) - span;
        let k = k * g;
        let (a, b) = choose_ab(big_a, big_b, k, l).unwrap();
        let upper = 2 * l + 2 * big_a.lcm(&big_b);
        prop_assert_eq!((a * big_a) as i64 - (b * big_b) as i64, -k);
        prop_assert!((l..=upper).contains(&(a * big_a)));
        prop_assert!((l..=upper).contains(&(b * big_b)));
    }

    #[test]
    fn choose_ab_rejects_indivisible_k(big_a in 1u64..60, big_b in 1u64..60, l in 0u64..100, k in -200i64..200) {
        prop_assume!(k % big_a.gcd(&big_b) as i64 != 0);
        prop_assert!(matches!(choose_ab(big_a, big_b, k, l), Err(Error::Precondition(_))));
    }

    #[test]
    fn unpump_preserves_ends_and_residue(seed in any::<u64>(), g in 1u64..7, len in 0usize..300) {
        let ocs = random_ocs(5, 0.3, 0.3, seed).unwrap();
        let mut rng = common::rng(seed);
        let walk = common::random_path(&ocs, Config::new(0, 3), len, &mut rng);
        let sigma = walk.proj();
        let out = unpump_mod_gcd(&sigma, g).unwrap();
        prop_assert!(out.is_consistent());
        prop_assert!(out.len() <= sigma.len());
        prop_assert!(out.len() < g as usize * 5);
        let m = g as i64;
        prop_assert_eq!(out.effect().mod_floor(&m), sigma.effect().mod_floor(&m));
        if !out.is_empty() {
            prop_assert_eq!((out.src(), out.targ()), (sigma.src(), sigma.targ()));
        }
        let twice = unpump_mod_gcd(&out, g).unwrap();
        prop_assert_eq!(twice, out);
    }

    #[test]
    fn negation_is_an_involution(seed in any::<u64>(), n in 1usize..8, d in 0.0f64..0.5) {
        let z = random_zocs(n, d, seed).unwrap();
        prop_assert_eq!(negate(&negate(&z)), z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normalized_paths_are_valid_and_short(seed in any::<u64>(), n in 2usize..8, p in 0usize..8, q in 0usize..8) {
        let ocs = random_ocs(n, 0.3, 0.2, seed).unwrap();
        let (a, b) = (Config::new(p % n, 0), Config::new(q % n, 0));
        match normalize_path(&ocs, a, b) {
            Ok(np) => {
                prop_assert!(validate_path(&ocs, &np.path).is_ok());
                prop_assert_eq!((np.path.src(), np.path.targ()), (a, b));
                prop_assert!(np.path.len() as u64 <= zero_bound(n).unwrap());
            }
            Err(e) => {
                prop_assert_eq!(e, Error::Unreachable);
                prop_assert!(shortest_path(&ocs, a, b).unwrap().is_none());
            }
        }
    }

    #[test]
    fn oracle_is_stable_beyond_the_bound(seed in any::<u64>(), n in 2usize..7, p in 0usize..7, q in 0usize..7) {
        let ocs = random_ocs(n, 0.3, 0.2, seed).unwrap();
        let (a, b) = (Config::new(p % n, 0), Config::new(q % n, 0));
        let bound = zero_bound(n).unwrap();
        let at_bound = oracle_shortest_path(&ocs, a, b, bound, bound as usize);
        let doubled = oracle_shortest_path(&ocs, a, b, 2 * bound, 2 * bound as usize);
        prop_assert_eq!(at_bound, doubled);
    }
}
