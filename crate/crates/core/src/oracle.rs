//! Plain exhaustive reference solvers. They share no code with the search
//! and normalization modules and favour obviousness over speed.

use std::collections::{HashMap, HashSet};

use crate::oca::Oca;
use crate::ocs::{fire, Config, Ocs, Transition};
use crate::zcounter::{z_fire, ZConfig, ZOcs};

fn successors(ocs: &Ocs, c: Config) -> Vec<Config> {
    ocs.transitions().iter().filter_map(|t| fire(c, t).ok()).collect()
}

/// Length of a shortest path using at most `depth_cap` steps and counters
/// at most `counter_cap`, found level by level.
pub fn oracle_shortest_path(
    ocs: &Ocs,
    alpha: Config,
    beta: Config,
    counter_cap: u64,
    depth_cap: usize,
) -> Option<usize> {
    if alpha.counter > counter_cap {
        return None;
    }
    let mut seen: HashSet<Config> = HashSet::from([alpha]);
    let mut level = vec![alpha];
    for depth in 0..=depth_cap {
        if level.contains(&beta) {
            return Some(depth);
        }
        let mut next = Vec::new();
        for &c in &level {
            for s in successors(ocs, c) {
                if s.counter <= counter_cap && seen.insert(s) {
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    None
}

/// Distance from `alpha` to every configuration reachable within the caps.
pub fn oracle_distances(ocs: &Ocs, alpha: Config, counter_cap: u64, depth_cap: usize) -> HashMap<Config, usize> {
    let mut dist = HashMap::new();
    if alpha.counter > counter_cap {
        return dist;
    }
    dist.insert(alpha, 0);
    let mut level = vec![alpha];
    for depth in 1..=depth_cap {
        let mut next = Vec::new();
        for &c in &level {
            for s in successors(ocs, c) {
                if s.counter <= counter_cap && !dist.contains_key(&s) {
                    dist.insert(s, depth);
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    dist
}

/// `(intermediate zeros, length)` of a path minimizing zeros first and
/// then length, by breadth-first search over (configuration, zeros so far).
/// Zeros are capped at `n + 1`: a zero-minimal path never repeats a
/// zero-counter configuration.
pub fn oracle_min_zero(ocs: &Ocs, alpha: Config, beta: Config, counter_cap: u64) -> Option<(usize, usize)> {
    assert!(alpha.counter == 0 && beta.counter == 0, "endpoints must be at counter zero");
    if alpha == beta {
        return Some((0, 0));
    }
    let zero_cap = ocs.n() + 1;
    let width = counter_cap as usize + 1;
    let key = |c: Config, z: usize| (z * ocs.n() + c.state) * width + c.counter as usize;
    let mut seen = vec![false; (zero_cap + 1) * ocs.n() * width];
    seen[key(alpha, 0)] = true;
    let mut best: Option<(usize, usize)> = None;
    let mut level = vec![(alpha, 0usize)];
    let mut depth = 0;
    while !level.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &(c, z) in &level {
            for s in successors(ocs, c) {
                if s.counter > counter_cap {
                    continue;
                }
                if s == beta {
                    if best.is_none_or(|(bz, _)| z < bz) {
                        best = Some((z, depth));
                    }
                    continue;
                }
                let z2 = z + usize::from(s.counter == 0);
                // Paths with at least as many zeros as the best one found cannot improve it.
                if z2 <= zero_cap && best.is_none_or(|(bz, _)| z2 < bz) && !seen[key(s, z2)] {
                    seen[key(s, z2)] = true;
                    next.push((s, z2));
                }
            }
        }
        level = next;
    }
    best
}

/// Every simple cycle over non-zero transitions, each reported once
/// (starting from its lowest state). Exponential; for small systems only.
pub fn oracle_simple_cycles(ocs: &Ocs) -> Vec<Vec<Transition>> {
    fn extend(
        ocs: &Ocs,
        start: usize,
        cur: usize,
        on_path: &mut Vec<bool>,
        path: &mut Vec<Transition>,
        out: &mut Vec<Vec<Transition>>,
    ) {
        for t in ocs.positive_transitions().filter(|t| t.src == cur) {
            if t.dst == start {
                path.push(*t);
                out.push(path.clone());
                path.pop();
            } else if t.dst > start && !on_path[t.dst] {
                on_path[t.dst] = true;
                path.push(*t);
                extend(ocs, start, t.dst, on_path, path, out);
                path.pop();
                on_path[t.dst] = false;
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..ocs.n() {
        let mut on_path = vec![false; ocs.n()];
        on_path[start] = true;
        extend(ocs, start, start, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

/// Shortest path length in a system over the integers, with counters kept
/// within `window` of `alpha`'s counter.
pub fn oracle_z_shortest(z: &ZOcs, alpha: ZConfig, beta: ZConfig, window: i64, depth_cap: usize) -> Option<usize> {
    let mut seen: HashSet<ZConfig> = HashSet::from([alpha]);
    let mut level = vec![alpha];
    for depth in 0..=depth_cap {
        if level.contains(&beta) {
            return Some(depth);
        }
        let mut next = Vec::new();
        for &c in &level {
            for t in z.transitions() {
                if let Some(s) = z_fire(c, t) {
                    if (s.counter - alpha.counter).abs() <= window && seen.insert(s) {
                        next.push(s);
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    None
}

/// Length of a shortest accepted word, considering words up to `max_len`
/// and counters up to `counter_cap`. Tracks the set of configurations
/// reachable by reading exactly `l` letters.
pub fn oracle_min_word_length(oca: &Oca, max_len: usize, counter_cap: u64) -> Option<usize> {
    let closure = |mut set: HashSet<Config>| {
        let mut stack: Vec<Config> = set.iter().copied().collect();
        while let Some(c) = stack.pop() {
            for lt in oca.transitions().iter().filter(|lt| lt.label.is_none()) {
                if let Ok(s) = fire(c, &lt.transition) {
                    if s.counter <= counter_cap && set.insert(s) {
                        stack.push(s);
                    }
                }
            }
        }
        set
    };
    let accepting = |set: &HashSet<Config>| set.iter().any(|c| oca.finals().contains(&c.state));
    let mut current = closure(oca.initial().iter().map(|&q| Config::new(q, 0)).collect());
    for len in 0..=max_len {
        if accepting(&current) {
            return Some(len);
        }
        let mut next = HashSet::new();
        for &c in &current {
            for lt in oca.transitions().iter().filter(|lt| lt.label.is_some()) {
                if let Ok(s) = fire(c, &lt.transition) {
                    if s.counter <= counter_cap {
                        next.insert(s);
                    }
                }
            }
        }
        current = closure(next);
    }
    None
}
