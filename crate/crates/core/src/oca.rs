//! One-counter automata: labelled one-counter systems with initial and
//! final states, and a shortest accepted word.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::ocs::{fire, Config, Guard, Ocs, StateId, Transition};
use crate::reach::{memory_budget, zero_bound};

/// `None` is the empty word.
pub type Label = Option<String>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTransition {
    pub transition: Transition,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oca {
    ocs: Ocs,
    alphabet: Vec<String>,
    transitions: Vec<LabeledTransition>,
    initial: Vec<StateId>,
    finals: Vec<StateId>,
    /// Per state, indices into `transitions`.
    out: Vec<Vec<usize>>,
}

impl Oca {
    /// Builds an automaton over `names`. Duplicate (transition, label) pairs
    /// collapse; the same transition with two labels is kept twice.
    pub fn new(
        names: Vec<String>,
        alphabet: Vec<String>,
        transitions: impl IntoIterator<Item = LabeledTransition>,
        initial: Vec<StateId>,
        finals: Vec<StateId>,
    ) -> Result<Oca> {
        let mut list: Vec<LabeledTransition> = Vec::new();
        let mut seen = HashSet::new();
        for lt in transitions {
            if let Some(sym) = &lt.label {
                if !alphabet.contains(sym) {
                    return Err(Error::InvalidSystem(format!("label {sym:?} is not in the alphabet")));
                }
            }
            if seen.insert(lt.clone()) {
                list.push(lt);
            }
        }
        let ocs = Ocs::from_parts(names, list.iter().map(|lt| lt.transition))?;
        let n = ocs.n();
        if let Some(&q) = initial.iter().chain(&finals).find(|&&q| q >= n) {
            return Err(Error::InvalidSystem(format!("state {q} does not exist")));
        }
        let mut out = vec![Vec::new(); n];
        for (i, lt) in list.iter().enumerate() {
            out[lt.transition.src].push(i);
        }
        let mut alpha_sorted = alphabet;
        alpha_sorted.dedup();
        Ok(Oca { ocs, alphabet: alpha_sorted, transitions: list, initial, finals, out })
    }

    /// The underlying unlabelled system.
    pub fn ocs(&self) -> &Ocs {
        &self.ocs
    }

    pub fn n(&self) -> usize {
        self.ocs.n()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[LabeledTransition] {
        &self.transitions
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn finals(&self) -> &[StateId] {
        &self.finals
    }

    /// Labelled transitions fireable at `c`, in list order.
    pub fn enabled(&self, c: Config) -> impl Iterator<Item = &LabeledTransition> + '_ {
        self.out[c.state]
            .iter()
            .map(move |&i| &self.transitions[i])
            .filter(move |lt| lt.transition.guard.admits(c.counter))
    }
}

/// A shortest word accepted by `oca`, or `None` if its language is empty.
///
/// Searches configurations from `I x {0}` with empty-word steps costing 0
/// and lettered steps costing 1, keeping counters at most `14 n^2`.
pub fn shortest_word(oca: &Oca) -> Result<Option<Vec<String>>> {
    let n = oca.n();
    let cap = zero_bound(n)?;
    let width = cap as usize + 1;
    let needed = (n as u128) * (width as u128) * 32;
    if needed > memory_budget() as u128 {
        return Err(Error::ResourceExhausted { needed, budget: memory_budget() });
    }
    let idx = |c: Config| c.state * width + c.counter as usize;
    let mut dist = vec![u32::MAX; n * width];
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, 0); n * width];
    let is_final = {
        let mut f = vec![false; n];
        for &q in oca.finals() {
            f[q] = true;
        }
        f
    };
    let mut deque = VecDeque::new();
    for &q in oca.initial() {
        let c = Config::new(q, 0);
        if dist[idx(c)] != 0 {
            dist[idx(c)] = 0;
            deque.push_back((0u32, c));
        }
    }
    while let Some((d, gamma)) = deque.pop_front() {
        if d > dist[idx(gamma)] {
            continue;
        }
        if is_final[gamma.state] {
            let word = rebuild_word(oca, &parent, gamma, idx);
            if word.len() as u64 > cap {
                return Err(Error::Internal(format!("shortest word has length {} > 14n^2", word.len())));
            }
            return Ok(Some(word));
        }
        for (i, lt) in oca.out[gamma.state].iter().map(|&i| (i, &oca.transitions[i])) {
            let Ok(next) = fire(gamma, &lt.transition) else { continue };
            if next.counter > cap {
                continue;
            }
            let w = u32::from(lt.label.is_some());
            let nd = d + w;
            if nd < dist[idx(next)] {
                dist[idx(next)] = nd;
                parent[idx(next)] = (idx(gamma), i);
                if w == 0 {
                    deque.push_front((nd, next));
                } else {
                    deque.push_back((nd, next));
                }
            }
        }
    }
    Ok(None)
}

fn rebuild_word(oca: &Oca, parent: &[(usize, usize)], end: Config, idx: impl Fn(Config) -> usize) -> Vec<String> {
    let mut word = Vec::new();
    let mut at = idx(end);
    while parent[at].0 != usize::MAX {
        let (prev, t) = parent[at];
        if let Some(sym) = &oca.transitions[t].label {
            word.push(sym.clone());
        }
        at = prev;
    }
    word.reverse();
    word
}

impl LabeledTransition {
    pub fn new(transition: Transition, label: Option<&str>) -> Self {
        LabeledTransition { transition, label: label.map(str::to_owned) }
    }

    pub fn is_zero_test(&self) -> bool {
        self.transition.guard == Guard::Zero
    }
}
