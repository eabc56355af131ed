//! Systems whose single counter ranges over the integers, with transitions
//! guarded by the sign of the counter.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ocs::{fire, Config, Guard, Ocs, StateId, Transition};
use crate::reach::memory_budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZGuard {
    Positive,
    Negative,
    Zero,
}

impl ZGuard {
    pub fn admits(self, c: i64) -> bool {
        match self {
            ZGuard::Positive => c > 0,
            ZGuard::Negative => c < 0,
            ZGuard::Zero => c == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZTransition {
    pub src: StateId,
    pub eff: i64,
    pub dst: StateId,
    pub guard: ZGuard,
}

impl ZTransition {
    pub fn new(src: StateId, eff: i64, dst: StateId, guard: ZGuard) -> Self {
        ZTransition { src, eff, dst, guard }
    }

    /// `(q, -c, q')` under the opposite sign guard.
    pub fn negated(self) -> Self {
        let guard = match self.guard {
            ZGuard::Positive => ZGuard::Negative,
            ZGuard::Negative => ZGuard::Positive,
            ZGuard::Zero => ZGuard::Zero,
        };
        ZTransition { eff: -self.eff, guard, ..self }
    }
}

impl fmt::Display for ZTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.guard {
            ZGuard::Positive => ">0",
            ZGuard::Negative => "<0",
            ZGuard::Zero => "=0",
        };
        write!(f, "({}, {:+}, {})[{}]", self.src, self.eff, self.dst, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZConfig {
    pub state: StateId,
    pub counter: i64,
}

impl ZConfig {
    pub fn new(state: StateId, counter: i64) -> Self {
        ZConfig { state, counter }
    }
}

impl fmt::Display for ZConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.counter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZOcs {
    names: Vec<String>,
    transitions: Vec<ZTransition>,
    out: Vec<Vec<usize>>,
}

impl ZOcs {
    pub fn new(names: Vec<String>, transitions: impl IntoIterator<Item = ZTransition>) -> Result<ZOcs> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSystem("a system needs at least one state".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::InvalidSystem(format!("duplicate state name {dup:?}")));
        }
        let mut list = Vec::new();
        let mut uniq = HashSet::new();
        let mut out = vec![Vec::new(); n];
        for t in transitions {
            if t.src >= n || t.dst >= n {
                return Err(Error::InvalidSystem(format!("transition {t} refers to a state >= {n}")));
            }
            if !(-1..=1).contains(&t.eff) {
                return Err(Error::InvalidSystem(format!("transition {t} has an illegal effect")));
            }
            if uniq.insert(t) {
                out[t.src].push(list.len());
                list.push(t);
            }
        }
        Ok(ZOcs { names, transitions: list, out })
    }

    /// Views an ordinary system as one over the integers; it never leaves
    /// the nonnegative half.
    pub fn from_ocs(ocs: &Ocs) -> ZOcs {
        let ts = ocs.transitions().iter().map(|t| {
            let guard = match t.guard {
                Guard::Positive => ZGuard::Positive,
                Guard::Zero => ZGuard::Zero,
            };
            ZTransition::new(t.src, t.eff, t.dst, guard)
        });
        ZOcs::new(ocs.names().to_vec(), ts).expect("a valid system stays valid")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn transitions(&self) -> &[ZTransition] {
        &self.transitions
    }

    pub fn contains(&self, t: &ZTransition) -> bool {
        self.out[t.src].iter().any(|&i| self.transitions[i] == *t)
    }

    pub fn enabled(&self, c: ZConfig) -> impl Iterator<Item = &ZTransition> + '_ {
        self.out[c.state].iter().map(move |&i| &self.transitions[i]).filter(move |t| t.guard.admits(c.counter))
    }
}

pub fn z_fire(c: ZConfig, t: &ZTransition) -> Option<ZConfig> {
    (c.state == t.src && t.guard.admits(c.counter)).then(|| ZConfig::new(t.dst, c.counter + t.eff))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPath {
    configs: Vec<ZConfig>,
    steps: Vec<ZTransition>,
}

impl ZPath {
    pub fn empty(at: ZConfig) -> Self {
        ZPath { configs: vec![at], steps: Vec::new() }
    }

    /// The walk obtained by firing `steps` from `start`, if each is fireable.
    pub fn fasten(start: ZConfig, steps: &[ZTransition]) -> Option<ZPath> {
        let mut configs = vec![start];
        let mut cur = start;
        for t in steps {
            cur = z_fire(cur, t)?;
            configs.push(cur);
        }
        Some(ZPath { configs, steps: steps.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn src(&self) -> ZConfig {
        self.configs[0]
    }

    pub fn targ(&self) -> ZConfig {
        *self.configs.last().expect("non-empty")
    }

    pub fn configs(&self) -> &[ZConfig] {
        &self.configs
    }

    pub fn steps(&self) -> &[ZTransition] {
        &self.steps
    }

    /// The same walk with every counter and transition negated.
    pub fn negated(&self) -> ZPath {
        ZPath {
            configs: self.configs.iter().map(|c| ZConfig::new(c.state, -c.counter)).collect(),
            steps: self.steps.iter().map(|t| t.negated()).collect(),
        }
    }

    /// Every step belongs to `z` and fires correctly.
    pub fn is_valid_in(&self, z: &ZOcs) -> bool {
        self.steps
            .iter()
            .enumerate()
            .all(|(i, t)| z.contains(t) && z_fire(self.configs[i], t) == Some(self.configs[i + 1]))
    }
}

/// Swaps the positive and negative transitions and negates every effect.
pub fn negate(z: &ZOcs) -> ZOcs {
    ZOcs::new(z.names.clone(), z.transitions.iter().map(|t| t.negated())).expect("negation preserves validity")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// `O+`: the positive transitions of `z` plus its zero tests with
/// nonnegative effect. `O-` is the same built on `negate(z)`.
pub fn signed_projection(z: &ZOcs, sign: Sign) -> Ocs {
    let base;
    let z = match sign {
        Sign::Plus => z,
        Sign::Minus => {
            base = negate(z);
            &base
        }
    };
    let ts = z.transitions.iter().filter_map(|t| match t.guard {
        ZGuard::Positive => Some(Transition::positive(t.src, t.eff, t.dst)),
        ZGuard::Zero if t.eff >= 0 => Some(Transition::zero_test(t.src, t.eff, t.dst)),
        _ => None,
    });
    Ocs::from_parts(z.names.clone(), ts).expect("projection of a valid system is valid")
}

/// `O'+`: `O+` plus a zero test `(q, 0, q')` whenever `z` can go from
/// `(q, 0)` to `(q', 0)` with every intermediate counter negative. `O'-`
/// is symmetric.
///
/// Such excursions are arcs of the opposite projection; a shortest one has
/// length below `14 (n+1)^2` (prepend a fresh start state holding copies of
/// the initial zero tests, and drop all other zero tests), which bounds the
/// counter explored.
pub fn augmented(z: &ZOcs, sign: Sign) -> Result<Ocs> {
    let own = signed_projection(z, sign);
    let other = signed_projection(z, if sign == Sign::Plus { Sign::Minus } else { Sign::Plus });
    let n = z.n();
    let cap = 14 * (n as u64 + 1) * (n as u64 + 1);
    let mut extra = Vec::new();
    for q in 0..n {
        for q2 in arc_targets(&other, q, cap) {
            extra.push(Transition::zero_test(q, 0, q2));
        }
    }
    Ocs::from_parts(own.names().to_vec(), own.transitions().iter().copied().chain(extra))
}

/// States `q'` with an arc `(q, 0) -> (q', 0)` of length at least two whose
/// counters stay at most `cap`.
fn arc_targets(ocs: &Ocs, q: StateId, cap: u64) -> Vec<StateId> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut found = Vec::new();
    let mut found_set = HashSet::new();
    for t in ocs.enabled(Config::new(q, 0)) {
        let next = fire(Config::new(q, 0), t).expect("enabled transitions fire");
        if next.counter > 0 && seen.insert(next) {
            queue.push_back(next);
        }
    }
    while let Some(c) = queue.pop_front() {
        for t in ocs.enabled(c) {
            let next = fire(c, t).expect("enabled transitions fire");
            if next.counter == 0 {
                if found_set.insert(next.state) {
                    found.push(next.state);
                }
            } else if next.counter <= cap && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    found
}

/// `56 n^2 + n (|c_alpha| + |c_beta|)`.
pub fn z_length_bound(n: usize, c_alpha: i64, c_beta: i64) -> Result<u64> {
    let n = n as u64;
    n.checked_mul(n)
        .and_then(|s| s.checked_mul(56))
        .and_then(|s| s.checked_add(n.checked_mul(c_alpha.unsigned_abs().checked_add(c_beta.unsigned_abs())?)?))
        .ok_or(Error::Overflow("56n^2 bound"))
}

/// A shortest path from `alpha` to `beta`, searching counters within `D`
/// of `c_alpha` and lengths up to `D`, where `D` is the length bound.
pub fn z_shortest_path(z: &ZOcs, alpha: ZConfig, beta: ZConfig) -> Result<Option<ZPath>> {
    if alpha.state >= z.n() || beta.state >= z.n() {
        return Err(Error::Precondition("endpoint state does not exist".into()));
    }
    let d = z_length_bound(z.n(), alpha.counter, beta.counter)?;
    let width = 2 * d as u128 + 1;
    let needed = width * z.n() as u128;
    if needed > memory_budget() as u128 {
        return Err(Error::ResourceExhausted { needed, budget: memory_budget() });
    }
    let d = d as i64;
    let lo = alpha.counter - d;
    let width = width as usize;
    let idx = |c: ZConfig| c.state * width + (c.counter - lo) as usize;
    let mut bits = vec![0u64; (needed as usize).div_ceil(64)];
    let mut mark = |i: usize| {
        let fresh = bits[i / 64] & (1 << (i % 64)) == 0;
        bits[i / 64] |= 1 << (i % 64);
        fresh
    };
    let mut nodes: Vec<(ZConfig, usize, usize)> = vec![(alpha, usize::MAX, 0)];
    mark(idx(alpha));
    if alpha == beta {
        return Ok(Some(ZPath::empty(alpha)));
    }
    let (mut start, mut depth) = (0, 0);
    while start < nodes.len() && depth < d {
        let end = nodes.len();
        for at in start..end {
            let c = nodes[at].0;
            for &tid in &z.out[c.state] {
                let t = &z.transitions[tid];
                let Some(next) = z_fire(c, t) else { continue };
                if (next.counter - alpha.counter).abs() > d || !mark(idx(next)) {
                    continue;
                }
                nodes.push((next, at, tid));
                if next == beta {
                    let mut steps = Vec::new();
                    let mut configs = Vec::new();
                    let mut cur = nodes.len() - 1;
                    loop {
                        let (cfg, parent, tid) = nodes[cur];
                        configs.push(cfg);
                        if parent == usize::MAX {
                            break;
                        }
                        steps.push(z.transitions[tid]);
                        cur = parent;
                    }
                    configs.reverse();
                    steps.reverse();
                    let path = ZPath { configs, steps };
                    if path.len() as i64 > d {
                        return Err(Error::Internal("z-path exceeds the length bound".into()));
                    }
                    return Ok(Some(path));
                }
            }
        }
        start = end;
        depth += 1;
    }
    Ok(None)
}
