#![allow(dead_code)]

use ocspath::ocs::fire;
use ocspath::zcounter::z_fire;
use std::collections::HashSet;

use ocspath::{Config, Ocs, Path, Transition, ZConfig, ZGuard, ZOcs, ZPath, ZTransition};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Configurations and steps of a random walk of at most `len` steps.
pub fn random_walk(ocs: &Ocs, start: Config, len: usize, rng: &mut impl Rng) -> (Vec<Config>, Vec<Transition>) {
    let mut configs = vec![start];
    let mut steps = Vec::new();
    let mut cur = start;
    for _ in 0..len {
        let enabled: Vec<&Transition> = ocs.enabled(cur).collect();
        let Some(t) = enabled.choose(rng) else { break };
        cur = fire(cur, t).unwrap();
        configs.push(cur);
        steps.push(**t);
    }
    (configs, steps)
}

pub fn random_path(ocs: &Ocs, start: Config, len: usize, rng: &mut impl Rng) -> Path {
    let (configs, steps) = random_walk(ocs, start, len, rng);
    Path::from_parts(configs, steps).unwrap()
}

pub fn random_zwalk(z: &ZOcs, start: ZConfig, len: usize, rng: &mut impl Rng) -> Vec<ZTransition> {
    let mut steps = Vec::new();
    let mut cur = start;
    for _ in 0..len {
        let enabled: Vec<&ZTransition> = z.enabled(cur).collect();
        let Some(t) = enabled.choose(rng) else { break };
        cur = z_fire(cur, t).unwrap();
        steps.push(**t);
    }
    steps
}

/// Configurations at counter `>= a` reachable from `(p, a)` along a path
/// with exactly `j` configurations at counter `>= a`, for `j = 1..=max`.
pub fn level_layers(ocs: &Ocs, p: usize, a: u64, max: usize) -> Vec<HashSet<Config>> {
    let mut layers = vec![HashSet::from([Config::new(p, a)])];
    while layers.len() < max {
        let mut next = HashSet::new();
        for &c in layers.last().unwrap() {
            let mut below = HashSet::new();
            let mut stack = Vec::new();
            for t in ocs.transitions() {
                let Ok(s) = fire(c, t) else { continue };
                if s.counter >= a {
                    next.insert(s);
                } else if below.insert(s) {
                    stack.push(s);
                }
            }
            while let Some(d) = stack.pop() {
                for t in ocs.transitions() {
                    let Ok(s) = fire(d, t) else { continue };
                    if s.counter >= a {
                        next.insert(s);
                    } else if below.insert(s) {
                        stack.push(s);
                    }
                }
            }
        }
        layers.push(next);
    }
    layers
}

/// The plain counterpart of an integer path that uses no negative guard
/// and starts at a nonnegative counter.
pub fn to_plain(path: &ZPath) -> Option<(Config, Vec<Transition>)> {
    let start = path.src();
    let steps = path
        .steps()
        .iter()
        .map(|t| match t.guard {
            ZGuard::Positive => Some(Transition::positive(t.src, t.eff, t.dst)),
            ZGuard::Zero => Some(Transition::zero_test(t.src, t.eff, t.dst)),
            ZGuard::Negative => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some((Config::new(start.state, u64::try_from(start.counter).ok()?), steps))
}
