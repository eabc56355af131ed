//! Exact searches over the configuration graph.
//!
//! Every solver caps the counter (and, for plain BFS, the depth) using the
//! quadratic length bounds, so truncation never loses an optimal witness.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::ocs::{fire, Config, Ocs, Path, StateId, Transition};

/// Default size of a visited bitmap, in bits.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

static MEMORY_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_MEMORY_BUDGET);

/// Sets the process-wide limit on visited-bitmap size (in bits).
pub fn set_memory_budget(bits: u64) {
    MEMORY_BUDGET.store(bits, Ordering::Relaxed);
}

pub fn memory_budget() -> u64 {
    MEMORY_BUDGET.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub depth_cap: u64,
    pub counter_cap: u64,
}

impl SearchCaps {
    /// Caps for a query from `alpha` to `beta` that are lossless for
    /// shortest paths: the length bound `14n^2 + n*max(c_alpha, c_beta)` and
    /// the highest counter a path of that length can reach.
    pub fn for_query(n: usize, alpha: Config, beta: Config) -> Result<SearchCaps> {
        let depth_cap = length_bound(n, alpha.counter, beta.counter)?;
        let counter_cap = alpha.counter.checked_add(depth_cap).ok_or(Error::Overflow("counter cap"))?;
        Ok(SearchCaps { depth_cap, counter_cap })
    }
}

/// `14 n^2`.
pub fn zero_bound(n: usize) -> Result<u64> {
    (n as u64).checked_mul(n as u64).and_then(|s| s.checked_mul(14)).ok_or(Error::Overflow("14n^2"))
}

/// `14 n^2 + n * max(c_alpha, c_beta)`.
pub fn length_bound(n: usize, c_alpha: u64, c_beta: u64) -> Result<u64> {
    (n as u64)
        .checked_mul(c_alpha.max(c_beta))
        .and_then(|x| x.checked_add(zero_bound(n).ok()?))
        .ok_or(Error::Overflow("length bound"))
}

fn check_state(ocs: &Ocs, c: Config) -> Result<()> {
    if c.state >= ocs.n() {
        return Err(Error::Precondition(format!("state {} does not exist", c.state)));
    }
    Ok(())
}

fn check_zero_endpoints(alpha: Config, beta: Config) -> Result<()> {
    if alpha.counter != 0 || beta.counter != 0 {
        return Err(Error::Precondition(format!("endpoints must have counter 0, got {alpha} and {beta}")));
    }
    Ok(())
}

/// Bit set over `states x 0..=counter_cap`.
struct Visited {
    width: u64,
    bits: Vec<u64>,
}

impl Visited {
    fn new(n: usize, counter_cap: u64) -> Result<Visited> {
        let width = counter_cap as u128 + 1;
        let needed = width * n as u128;
        let budget = memory_budget();
        if needed > budget as u128 {
            return Err(Error::ResourceExhausted { needed, budget });
        }
        Ok(Visited { width: width as u64, bits: vec![0; (needed as usize).div_ceil(64)] })
    }

    /// Marks `c`; returns false if it was already marked.
    fn insert(&mut self, c: Config) -> bool {
        let i = c.state as u64 * self.width + c.counter;
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        fresh
    }
}

const ROOT: usize = usize::MAX;

fn rebuild(nodes: &[(Config, usize, usize)], ocs: &Ocs, mut at: usize) -> Path {
    let mut configs = Vec::new();
    let mut steps = Vec::new();
    loop {
        let (c, parent, tid) = nodes[at];
        configs.push(c);
        if parent == ROOT {
            break;
        }
        steps.push(ocs.transitions()[tid]);
        at = parent;
    }
    configs.reverse();
    steps.reverse();
    Path::from_parts(configs, steps).expect("parent chain has matching shape")
}

/// Breadth-first search from `alpha`. Successors are expanded in transition
/// list order and only configurations accepted by `admit` are entered; the
/// first admitted configuration satisfying `goal` ends the search.
fn bfs(
    ocs: &Ocs,
    alpha: Config,
    caps: SearchCaps,
    admit: impl Fn(Config) -> bool,
    goal: impl Fn(Config) -> bool,
) -> Result<Option<Path>> {
    check_state(ocs, alpha)?;
    if alpha.counter > caps.counter_cap {
        return Ok(None);
    }
    let mut visited = Visited::new(ocs.n(), caps.counter_cap)?;
    visited.insert(alpha);
    let mut nodes: Vec<(Config, usize, usize)> = vec![(alpha, ROOT, 0)];
    if goal(alpha) {
        return Ok(Some(Path::empty(alpha)));
    }
    let mut level_start = 0;
    let mut depth = 0;
    while level_start < nodes.len() && depth < caps.depth_cap {
        let level_end = nodes.len();
        for at in level_start..level_end {
            let gamma = nodes[at].0;
            for &tid in ocs.outgoing_ids(gamma.state, gamma.counter > 0) {
                let t = &ocs.transitions()[tid];
                let Ok(next) = fire(gamma, t) else { continue };
                if next.counter > caps.counter_cap || !admit(next) || !visited.insert(next) {
                    continue;
                }
                nodes.push((next, at, tid));
                if goal(next) {
                    return Ok(Some(rebuild(&nodes, ocs, nodes.len() - 1)));
                }
            }
        }
        level_start = level_end;
        depth += 1;
    }
    Ok(None)
}

/// A globally shortest path from `alpha` to `beta`, or `None` if `beta` is
/// unreachable.
pub fn shortest_path(ocs: &Ocs, alpha: Config, beta: Config) -> Result<Option<Path>> {
    check_state(ocs, beta)?;
    let caps = SearchCaps::for_query(ocs.n(), alpha, beta)?;
    let found = shortest_path_capped(ocs, alpha, beta, caps)?;
    if let Some(p) = &found {
        if p.len() as u64 > caps.depth_cap {
            return Err(Error::Internal(format!(
                "shortest path of length {} exceeds the bound {}",
                p.len(),
                caps.depth_cap
            )));
        }
    }
    Ok(found)
}

/// Shortest path among those of length `<= depth_cap` whose counters stay
/// `<= counter_cap`.
pub fn shortest_path_capped(ocs: &Ocs, alpha: Config, beta: Config, caps: SearchCaps) -> Result<Option<Path>> {
    check_state(ocs, beta)?;
    bfs(ocs, alpha, caps, |_| true, |c| c == beta)
}

/// A path from `alpha` to `beta` (both at counter 0) with the fewest
/// intermediate zero-counter configurations, shortest among those.
pub fn min_zero_path(ocs: &Ocs, alpha: Config, beta: Config) -> Result<Option<Path>> {
    check_state(ocs, alpha)?;
    check_state(ocs, beta)?;
    check_zero_endpoints(alpha, beta)?;
    let cap = zero_bound(ocs.n())?;

    let mut best: HashMap<Config, (u64, u64)> = HashMap::new();
    let mut parent: HashMap<Config, (Config, usize)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    best.insert(alpha, (0, 0));
    heap.push(Reverse((0u64, 0u64, seq, alpha)));

    while let Some(Reverse((zeros, steps, _, gamma))) = heap.pop() {
        if best.get(&gamma) != Some(&(zeros, steps)) {
            continue;
        }
        if gamma == beta {
            let mut configs = vec![beta];
            let mut trans = Vec::new();
            let mut cur = beta;
            while cur != alpha {
                let (prev, tid) = parent[&cur];
                trans.push(ocs.transitions()[tid]);
                configs.push(prev);
                cur = prev;
            }
            configs.reverse();
            trans.reverse();
            let path = Path::from_parts(configs, trans)?;
            if path.len() as u64 > cap {
                return Err(Error::Internal(format!(
                    "zero-minimal path of length {} exceeds 14n^2 = {cap}",
                    path.len()
                )));
            }
            return Ok(Some(path));
        }
        for &tid in ocs.outgoing_ids(gamma.state, gamma.counter > 0) {
            let Ok(next) = fire(gamma, &ocs.transitions()[tid]) else { continue };
            if next.counter > cap {
                continue;
            }
            let cost = (zeros + u64::from(next.counter == 0 && next != beta), steps + 1);
            if best.get(&next).is_some_and(|&b| b <= cost) {
                continue;
            }
            best.insert(next, cost);
            parent.insert(next, (gamma, tid));
            seq += 1;
            heap.push(Reverse((cost.0, cost.1, seq, next)));
        }
    }
    Ok(None)
}

/// The shortest arc from `alpha` to `beta` (both at counter 0) whose every
/// configuration has counter `< 5n`, if any.
pub fn shortest_low_arc(ocs: &Ocs, alpha: Config, beta: Config) -> Result<Option<Path>> {
    check_state(ocs, alpha)?;
    check_state(ocs, beta)?;
    check_zero_endpoints(alpha, beta)?;
    let low = 5 * ocs.n() as u64;
    let caps = SearchCaps { depth_cap: u64::MAX, counter_cap: low - 1 };
    bfs(ocs, alpha, caps, |c| c.counter > 0 || c == beta, |c| c == beta)
}

/// The lifted system `O^a`: same states and non-zero transitions, with zero
/// tests standing for every way of getting from `(q, a)` to a configuration
/// at level `a` or one above without passing a configuration `>= a` in
/// between.
///
/// Concretely its zero tests are `(q, e, q')` for each transition of `ocs`
/// fireable at counter `a` with effect `e >= 0`, plus `(q, 0, q')` whenever
/// `(q, a)` reaches `(q', a)` through configurations all below `a`. Then
/// `O^a` has a path `(p, 0) -> (q, 0)` of length `K` iff `ocs` has a path
/// `(p, a) -> (q, a)` with exactly `K + 1` configurations at counter `>= a`.
pub fn build_lifted(ocs: &Ocs, a: u64) -> Result<Ocs> {
    let n = ocs.n();
    let mut tests: Vec<Transition> = Vec::new();
    for q in 0..n {
        for t in ocs.enabled(Config::new(q, a)) {
            if t.eff >= 0 {
                tests.push(Transition::zero_test(t.src, t.eff, t.dst));
            }
        }
    }
    if a > 0 {
        for q in 0..n {
            for q2 in dips_from(ocs, q, a)? {
                tests.push(Transition::zero_test(q, 0, q2));
            }
        }
    }
    let positive = ocs.positive_transitions().copied();
    Ocs::from_parts(ocs.names().to_vec(), positive.chain(tests))
}

/// States `q'` such that `(q, a)` reaches `(q', a)` with every intermediate
/// counter in `0..a`, in order of discovery.
fn dips_from(ocs: &Ocs, q: StateId, a: u64) -> Result<Vec<StateId>> {
    let mut visited = Visited::new(ocs.n(), a - 1)?;
    let mut queue = VecDeque::new();
    let mut found = Vec::new();
    let mut seen_target = vec![false; ocs.n()];
    for t in ocs.enabled(Config::new(q, a)) {
        if t.eff == -1 {
            let c = Config::new(t.dst, a - 1);
            if visited.insert(c) {
                queue.push_back(c);
            }
        }
    }
    while let Some(gamma) = queue.pop_front() {
        for t in ocs.enabled(gamma) {
            let next = fire(gamma, t).expect("enabled transitions fire");
            if next.counter == a {
                if !seen_target[next.state] {
                    seen_target[next.state] = true;
                    found.push(next.state);
                }
            } else if visited.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(found)
}
