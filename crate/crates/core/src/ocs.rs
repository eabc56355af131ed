//! One-counter systems, configurations, transition sequences and paths.
//!
//! States are dense indices `0..n`; display names are only kept for I/O.
//! A system holds its transitions in a single list (non-zero transitions and
//! zero tests interleaved in insertion order, duplicates collapsed). Search
//! code expands successors in that list order, which is what makes every
//! solver deterministic.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FireError, Result};

pub type StateId = usize;

/// Which counter values a transition may fire at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Guard {
    /// Non-zero transition, fireable when the counter is strictly positive.
    Positive,
    /// Zero test, fireable only when the counter is zero.
    Zero,
}

impl Guard {
    pub fn admits(self, counter: u64) -> bool {
        match self {
            Guard::Positive => counter > 0,
            Guard::Zero => counter == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub src: StateId,
    pub eff: i64,
    pub dst: StateId,
    pub guard: Guard,
}

impl Transition {
    pub fn positive(src: StateId, eff: i64, dst: StateId) -> Self {
        Transition { src, eff, dst, guard: Guard::Positive }
    }

    pub fn zero_test(src: StateId, eff: i64, dst: StateId) -> Self {
        Transition { src, eff, dst, guard: Guard::Zero }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.guard {
            Guard::Positive => ">0",
            Guard::Zero => "=0",
        };
        write!(f, "({}, {:+}, {})[{}]", self.src, self.eff, self.dst, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Config {
    pub state: StateId,
    pub counter: u64,
}

impl Config {
    pub fn new(state: StateId, counter: u64) -> Self {
        Config { state, counter }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.counter)
    }
}

/// A one-counter system: `n` states, non-zero transitions and zero tests.
#[derive(Debug, Clone)]
pub struct Ocs {
    names: Vec<String>,
    transitions: Vec<Transition>,
    index: HashMap<Transition, usize>,
    out_positive: Vec<Vec<usize>>,
    out_zero: Vec<Vec<usize>>,
}

impl PartialEq for Ocs {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.transitions == other.transitions
    }
}

impl Eq for Ocs {}

#[derive(Debug, Clone)]
pub struct OcsBuilder {
    names: Vec<String>,
    transitions: Vec<Transition>,
}

impl OcsBuilder {
    pub fn positive(&mut self, src: StateId, eff: i64, dst: StateId) -> &mut Self {
        self.transitions.push(Transition::positive(src, eff, dst));
        self
    }

    pub fn zero_test(&mut self, src: StateId, eff: i64, dst: StateId) -> &mut Self {
        self.transitions.push(Transition::zero_test(src, eff, dst));
        self
    }

    pub fn transition(&mut self, t: Transition) -> &mut Self {
        self.transitions.push(t);
        self
    }

    pub fn build(&self) -> Result<Ocs> {
        Ocs::from_parts(self.names.clone(), self.transitions.iter().copied())
    }
}

impl Ocs {
    /// Starts a system with `n` states named `q0..q{n-1}`.
    pub fn builder(n: usize) -> OcsBuilder {
        Self::named_builder(default_names(n))
    }

    pub fn named_builder(names: Vec<String>) -> OcsBuilder {
        OcsBuilder { names, transitions: Vec::new() }
    }

    pub fn from_parts(names: Vec<String>, transitions: impl IntoIterator<Item = Transition>) -> Result<Ocs> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSystem("a system needs at least one state".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidSystem(format!("duplicate state name {name:?}")));
            }
        }
        let mut ocs = Ocs {
            names,
            transitions: Vec::new(),
            index: HashMap::new(),
            out_positive: vec![Vec::new(); n],
            out_zero: vec![Vec::new(); n],
        };
        for t in transitions {
            if t.src >= n || t.dst >= n {
                return Err(Error::InvalidSystem(format!("transition {t} refers to a state >= {n}")));
            }
            let ok = match t.guard {
                Guard::Positive => (-1..=1).contains(&t.eff),
                Guard::Zero => (0..=1).contains(&t.eff),
            };
            if !ok {
                return Err(Error::InvalidSystem(format!("transition {t} has an illegal effect")));
            }
            if ocs.index.contains_key(&t) {
                continue;
            }
            let id = ocs.transitions.len();
            ocs.index.insert(t, id);
            ocs.transitions.push(t);
            match t.guard {
                Guard::Positive => ocs.out_positive[t.src].push(id),
                Guard::Zero => ocs.out_zero[t.src].push(id),
            }
        }
        Ok(ocs)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, state: StateId) -> &str {
        &self.names[state]
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|s| s == name)
    }

    /// All transitions in canonical (insertion) order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition_index(&self, t: &Transition) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.index.contains_key(t)
    }

    pub fn positive_transitions(&self) -> impl Iterator<Item = &Transition> + '_ {
        self.transitions.iter().filter(|t| t.guard == Guard::Positive)
    }

    pub fn zero_tests(&self) -> impl Iterator<Item = &Transition> + '_ {
        self.transitions.iter().filter(|t| t.guard == Guard::Zero)
    }

    /// Indices of the transitions fireable from `state` when the counter is
    /// zero (`positive == false`) or positive.
    pub fn outgoing_ids(&self, state: StateId, positive: bool) -> &[usize] {
        if positive {
            &self.out_positive[state]
        } else {
            &self.out_zero[state]
        }
    }

    /// Transitions fireable at `config`, in list order.
    pub fn enabled(&self, config: Config) -> impl Iterator<Item = &Transition> + '_ {
        self.outgoing_ids(config.state, config.counter > 0).iter().map(move |&id| &self.transitions[id])
    }

    /// At most one fireable transition in every configuration.
    pub fn is_deterministic(&self) -> bool {
        (0..self.n()).all(|q| self.out_positive[q].len() <= 1 && self.out_zero[q].len() <= 1)
    }
}

/// Names `q0..q{n-1}`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

pub fn fire(gamma: Config, t: &Transition) -> Result<Config, FireError> {
    if gamma.state != t.src {
        return Err(FireError::WrongState { expected: t.src, found: gamma.state });
    }
    if !t.guard.admits(gamma.counter) {
        return Err(FireError::GuardMismatch { guard: t.guard, counter: gamma.counter });
    }
    let counter = gamma.counter.checked_add_signed(t.eff).ok_or(FireError::NegativeCounter)?;
    Ok(Config::new(t.dst, counter))
}

/// An ordered list of transitions, not necessarily consistent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransitionSeq(pub Vec<Transition>);

impl TransitionSeq {
    pub fn new(steps: Vec<Transition>) -> Self {
        TransitionSeq(steps)
    }

    pub fn empty() -> Self {
        TransitionSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Transition] {
        &self.0
    }

    pub fn effect(&self) -> i64 {
        effect(&self.0)
    }

    /// `targ(t_i) = src(t_{i+1})` for every adjacent pair.
    pub fn is_consistent(&self) -> bool {
        self.0.windows(2).all(|w| w[0].dst == w[1].src)
    }

    pub fn src(&self) -> Option<StateId> {
        self.0.first().map(|t| t.src)
    }

    pub fn targ(&self) -> Option<StateId> {
        self.0.last().map(|t| t.dst)
    }

    pub fn concat(&self, other: &TransitionSeq) -> TransitionSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TransitionSeq(v)
    }

    pub fn repeat(&self, times: usize) -> TransitionSeq {
        TransitionSeq(self.0.repeat(times))
    }

    /// Lowest prefix effect, including the empty prefix.
    pub fn min_prefix_effect(&self) -> i64 {
        let mut acc = 0;
        let mut low = 0;
        for t in &self.0 {
            acc += t.eff;
            low = low.min(acc);
        }
        low
    }
}

pub fn effect(steps: &[Transition]) -> i64 {
    steps.iter().map(|t| t.eff).sum()
}

/// A walk in the configuration graph: `configs[i] --steps[i]--> configs[i+1]`.
///
/// Construction only checks the shape (`configs.len() == steps.len() + 1`);
/// use [`validate_path`] for the semantic invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    configs: Vec<Config>,
    steps: Vec<Transition>,
}

impl Path {
    pub fn empty(at: Config) -> Path {
        Path { configs: vec![at], steps: Vec::new() }
    }

    pub fn from_parts(configs: Vec<Config>, steps: Vec<Transition>) -> Result<Path> {
        if configs.len() != steps.len() + 1 {
            return Err(Error::Precondition(format!(
                "a path with {} steps needs {} configurations, got {}",
                steps.len(),
                steps.len() + 1,
                configs.len()
            )));
        }
        Ok(Path { configs, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn src(&self) -> Config {
        self.configs[0]
    }

    pub fn targ(&self) -> Config {
        *self.configs.last().expect("a path has at least one configuration")
    }

    /// All appearing configurations, source and target included.
    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn steps(&self) -> &[Transition] {
        &self.steps
    }

    pub fn proj(&self) -> TransitionSeq {
        TransitionSeq(self.steps.clone())
    }

    pub fn effect(&self) -> i64 {
        effect(&self.steps)
    }

    pub fn max_counter(&self) -> u64 {
        self.configs.iter().map(|c| c.counter).max().unwrap_or(0)
    }

    /// Number of intermediate configurations (neither source nor target)
    /// with counter zero.
    pub fn intermediate_zeros(&self) -> usize {
        if self.configs.len() <= 2 {
            return 0;
        }
        self.configs[1..self.configs.len() - 1].iter().filter(|c| c.counter == 0).count()
    }

    /// Endpoints at counter zero, every intermediate configuration positive.
    pub fn is_arc(&self) -> bool {
        self.src().counter == 0 && self.targ().counter == 0 && self.intermediate_zeros() == 0
    }

    /// Every configuration, target included, has counter `< bound`.
    pub fn is_below(&self, bound: u64) -> bool {
        self.configs.iter().all(|c| c.counter < bound)
    }

    /// The sub-path between configuration positions `from` and `to` (inclusive).
    pub fn slice(&self, from: usize, to: usize) -> Path {
        assert!(from <= to && to < self.configs.len(), "slice {from}..={to} out of range");
        Path { configs: self.configs[from..=to].to_vec(), steps: self.steps[from..to].to_vec() }
    }

    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.targ() != other.src() {
            return Err(Error::Precondition(format!(
                "cannot join a path ending in {} to one starting in {}",
                self.targ(),
                other.src()
            )));
        }
        let mut configs = self.configs.clone();
        configs.extend_from_slice(&other.configs[1..]);
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(Path { configs, steps })
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Path>) -> Result<Path> {
        let mut it = parts.into_iter();
        let first = it.next().ok_or_else(|| Error::Precondition("nothing to concatenate".into()))?.clone();
        it.try_fold(first, |acc, p| acc.concat(p))
    }
}

/// The unique path starting at `gamma` whose projection is `sigma`.
pub fn fasten(gamma: Config, sigma: &[Transition]) -> Result<Path> {
    let mut configs = Vec::with_capacity(sigma.len() + 1);
    configs.push(gamma);
    let mut cur = gamma;
    for (step, t) in sigma.iter().enumerate() {
        cur = fire(cur, t).map_err(|reason| Error::NotFireable { step, reason })?;
        configs.push(cur);
    }
    Ok(Path { configs, steps: sigma.to_vec() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathRule {
    /// The transition is not part of the system.
    UnknownTransition,
    /// The transition leaves a different state than the configuration's.
    WrongSource,
    /// Zero test at a positive counter, or non-zero transition at zero.
    GuardMismatch,
    /// The recorded next configuration differs from the firing result.
    WrongSuccessor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathViolation {
    pub step: usize,
    pub rule: PathRule,
}

impl fmt::Display for PathViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {:?}", self.step, self.rule)
    }
}

/// Checks that every step of `rho` is a fireable transition of `ocs` that
/// produces the recorded next configuration.
pub fn validate_path(ocs: &Ocs, rho: &Path) -> Result<(), PathViolation> {
    for (step, t) in rho.steps.iter().enumerate() {
        let violation = |rule| PathViolation { step, rule };
        if !ocs.contains(t) {
            return Err(violation(PathRule::UnknownTransition));
        }
        let at = rho.configs[step];
        let next = match fire(at, t) {
            Ok(c) => c,
            Err(FireError::WrongState { .. }) => return Err(violation(PathRule::WrongSource)),
            Err(_) => return Err(violation(PathRule::GuardMismatch)),
        };
        if next != rho.configs[step + 1] {
            return Err(violation(PathRule::WrongSuccessor));
        }
    }
    Ok(())
}

/// Excises loops between repeated configurations until none repeats.
///
/// Scanning left to right, the earliest repeated configuration is cut back
/// to its last occurrence. The result keeps source and target, and never
/// has more zero-counter configurations than the input.
pub fn remove_repeats(rho: &Path) -> Path {
    let mut last = HashMap::with_capacity(rho.configs.len());
    for (i, c) in rho.configs.iter().enumerate() {
        last.insert(*c, i);
    }
    let mut configs = Vec::new();
    let mut steps = Vec::new();
    let mut pos = 0;
    loop {
        pos = last[&rho.configs[pos]];
        configs.push(rho.configs[pos]);
        if pos == rho.steps.len() {
            break;
        }
        steps.push(rho.steps[pos]);
        pos += 1;
    }
    Path { configs, steps }
}

/// Splits a zero-to-zero path into its arcs at every zero-counter
/// configuration. The empty path yields no arcs.
pub fn split_arcs(rho: &Path) -> Result<Vec<Path>> {
    if rho.src().counter != 0 || rho.targ().counter != 0 {
        return Err(Error::Precondition(format!(
            "split_arcs needs zero-counter endpoints, got {} and {}",
            rho.src(),
            rho.targ()
        )));
    }
    let mut arcs = Vec::new();
    let mut start = 0;
    for i in 1..rho.configs.len() {
        if rho.configs[i].counter == 0 {
            arcs.push(rho.slice(start, i));
            start = i;
        }
    }
    Ok(arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> Ocs {
        let mut b = Ocs::builder(3);
        b.zero_test(0, 1, 1).positive(1, 1, 0).positive(0, 1, 1).positive(0, -1, 2);
        b.positive(1, -1, 0).positive(2, -1, 0).positive(2, 0, 2);
        b.build().unwrap()
    }

    #[test]
    fn effect_is_additive() {
        assert_eq!(TransitionSeq::empty().effect(), 0);
        let s = TransitionSeq::new(vec![Transition::positive(0, 1, 1), Transition::positive(1, 1, 0)]);
        assert_eq!(s.effect(), 2);
        assert_eq!(s.concat(&s).effect(), 4);
    }

    #[test]
    fn fire_respects_guards() {
        assert_eq!(fire(Config::new(0, 0), &Transition::zero_test(0, 1, 1)), Ok(Config::new(1, 1)));
        assert!(matches!(
            fire(Config::new(0, 0), &Transition::positive(0, 0, 1)),
            Err(FireError::GuardMismatch { .. })
        ));
        assert!(matches!(
            fire(Config::new(0, 3), &Transition::zero_test(0, 0, 1)),
            Err(FireError::GuardMismatch { .. })
        ));
        assert!(matches!(fire(Config::new(2, 1), &Transition::positive(0, 0, 1)), Err(FireError::WrongState { .. })));
    }

    #[test]
    fn duplicates_collapse() {
        let mut b = Ocs::builder(2);
        b.positive(0, 1, 1).positive(0, 1, 1).zero_test(0, 1, 1);
        let ocs = b.build().unwrap();
        assert_eq!(ocs.transitions().len(), 2);
    }

    #[test]
    fn rejects_bad_systems() {
        let mut b = Ocs::builder(2);
        b.zero_test(0, -1, 1);
        assert!(b.build().is_err());
        let mut b = Ocs::builder(2);
        b.positive(0, 1, 2);
        assert!(b.build().is_err());
        assert!(Ocs::builder(0).build().is_err());
    }

    #[test]
    fn fasten_reports_first_failing_step() {
        let sigma = [Transition::zero_test(0, 1, 1), Transition::positive(1, -1, 0), Transition::positive(0, 1, 1)];
        match fasten(Config::new(0, 0), &sigma) {
            Err(Error::NotFireable { step, .. }) => assert_eq!(step, 2),
            other => panic!("unexpected {other:?}"),
        }
        let p = fasten(Config::new(4, 5), &[]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.src(), Config::new(4, 5));
    }

    #[test]
    fn validate_flags_zero_test_at_positive_counter() {
        let ocs = two_cycle();
        let good = fasten(
            Config::new(0, 0),
            &[Transition::zero_test(0, 1, 1), Transition::positive(1, 1, 0), Transition::positive(0, 1, 1)],
        )
        .unwrap();
        assert_eq!(validate_path(&ocs, &good), Ok(()));

        let configs = vec![Config::new(0, 0), Config::new(1, 1), Config::new(0, 2), Config::new(1, 3)];
        let steps = vec![Transition::zero_test(0, 1, 1), Transition::positive(1, 1, 0), Transition::zero_test(0, 1, 1)];
        let bad = Path::from_parts(configs, steps).unwrap();
        assert_eq!(validate_path(&ocs, &bad), Err(PathViolation { step: 2, rule: PathRule::GuardMismatch }));
    }

    #[test]
    fn remove_repeats_excises_loop() {
        let ocs = two_cycle();
        let sigma = [
            Transition::zero_test(0, 1, 1),
            Transition::positive(1, 1, 0),
            Transition::positive(0, -1, 2),
            Transition::positive(2, 0, 2),
            Transition::positive(2, 0, 2),
        ];
        let p = fasten(Config::new(0, 0), &sigma).unwrap();
        validate_path(&ocs, &p).unwrap();
        let q = remove_repeats(&p);
        assert_eq!(q.src(), p.src());
        assert_eq!(q.targ(), p.targ());
        assert_eq!(q.len(), 3);
        assert_eq!(validate_path(&ocs, &q), Ok(()));
        assert_eq!(remove_repeats(&q), q);
    }

    #[test]
    fn remove_repeats_can_collapse_to_empty() {
        let sigma = [Transition::zero_test(0, 1, 1), Transition::positive(1, -1, 0)];
        let p = fasten(Config::new(0, 0), &sigma).unwrap();
        assert!(remove_repeats(&p).is_empty());
    }

    #[test]
    fn split_arcs_edge_cases() {
        assert!(split_arcs(&Path::empty(Config::new(0, 0))).unwrap().is_empty());
        assert!(split_arcs(&Path::empty(Config::new(0, 1))).is_err());
        let sigma = [
            Transition::zero_test(0, 1, 1),
            Transition::positive(1, -1, 0),
            Transition::zero_test(0, 1, 1),
            Transition::positive(1, -1, 0),
        ];
        let p = fasten(Config::new(0, 0), &sigma).unwrap();
        let arcs = split_arcs(&p).unwrap();
        assert_eq!(arcs.len(), 2);
        assert!(arcs.iter().all(Path::is_arc));
        assert_eq!(Path::concat_all(&arcs).unwrap(), p);
    }
}
