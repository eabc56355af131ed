//! Strongly connected components of the transition multigraph (non-zero
//! transitions only) and the distinguished simple cycles per component.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ocs::{Ocs, StateId, Transition, TransitionSeq};

/// Component id. Components are numbered by their lowest member state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SccId(pub usize);

impl fmt::Display for SccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccAnalysis {
    component_of: Vec<SccId>,
    members: Vec<Vec<StateId>>,
    positive_cycle: Vec<Option<TransitionSeq>>,
    negative_cycle: Vec<Option<TransitionSeq>>,
    /// Non-zero transitions whose endpoints share a component, per source.
    internal: Vec<Vec<Transition>>,
}

impl SccAnalysis {
    pub fn analyze(ocs: &Ocs) -> SccAnalysis {
        let n = ocs.n();
        let mut succ: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for t in ocs.positive_transitions() {
            succ[t.src].push(t.dst);
        }
        let raw = tarjan(&succ);

        let mut comps: Vec<Vec<StateId>> = raw
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        let mut component_of = vec![SccId(0); n];
        for (id, c) in comps.iter().enumerate() {
            for &q in c {
                component_of[q] = SccId(id);
            }
        }

        let mut internal = vec![Vec::new(); n];
        for t in ocs.positive_transitions() {
            if component_of[t.src] == component_of[t.dst] {
                internal[t.src].push(*t);
            }
        }

        let mut analysis = SccAnalysis {
            component_of,
            members: comps,
            positive_cycle: Vec::new(),
            negative_cycle: Vec::new(),
            internal,
        };
        let count = analysis.members.len();
        analysis.positive_cycle = (0..count).map(|s| analysis.find_cycle(SccId(s), 1)).collect();
        analysis.negative_cycle = (0..count).map(|s| analysis.find_cycle(SccId(s), -1)).collect();
        analysis
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, q: StateId) -> SccId {
        self.component_of[q]
    }

    pub fn members(&self, s: SccId) -> &[StateId] {
        &self.members[s.0]
    }

    /// `n_S`, the number of states in the component.
    pub fn size(&self, s: SccId) -> usize {
        self.members[s.0].len()
    }

    pub fn pos_enabled(&self, s: SccId) -> bool {
        self.positive_cycle[s.0].is_some()
    }

    pub fn neg_enabled(&self, s: SccId) -> bool {
        self.negative_cycle[s.0].is_some()
    }

    /// The distinguished simple positive cycle of `s`, based at its lowest state.
    pub fn sigma_plus(&self, s: SccId) -> Option<&TransitionSeq> {
        self.positive_cycle[s.0].as_ref()
    }

    /// The distinguished simple negative cycle of `s`, based at its lowest state.
    pub fn sigma_minus(&self, s: SccId) -> Option<&TransitionSeq> {
        self.negative_cycle[s.0].as_ref()
    }

    pub fn base_plus(&self, s: SccId) -> Option<StateId> {
        self.sigma_plus(s).and_then(TransitionSeq::src)
    }

    pub fn base_minus(&self, s: SccId) -> Option<StateId> {
        self.sigma_minus(s).and_then(TransitionSeq::src)
    }

    /// A shortest sequence of non-zero transitions inside `s` from `p` to `q`.
    /// It visits pairwise distinct states, so it is shorter than `n_S` and
    /// fireable at `(p, c)` for every `c >= n_S`.
    pub fn connective(&self, s: SccId, p: StateId, q: StateId) -> Result<TransitionSeq> {
        if self.component_of[p] != s || self.component_of[q] != s {
            return Err(Error::Precondition(format!("states {p} and {q} are not both in component {s}")));
        }
        if p == q {
            return Ok(TransitionSeq::empty());
        }
        let mut parent: std::collections::HashMap<StateId, Transition> = Default::default();
        let mut queue = VecDeque::from([p]);
        while let Some(u) = queue.pop_front() {
            for t in &self.internal[u] {
                if t.dst == p || parent.contains_key(&t.dst) {
                    continue;
                }
                parent.insert(t.dst, *t);
                if t.dst == q {
                    let mut steps = Vec::new();
                    let mut cur = q;
                    while cur != p {
                        let t = parent[&cur];
                        steps.push(t);
                        cur = t.src;
                    }
                    steps.reverse();
                    return Ok(TransitionSeq::new(steps));
                }
                queue.push_back(t.dst);
            }
        }
        Err(Error::Internal(format!("no path from {p} to {q} inside component {s}")))
    }

    /// Longest-path relaxation (Bellman-Ford, all members as sources) in the
    /// direction `sign`. A positive-weight cycle exists iff relaxation never
    /// settles; once one does, the predecessor graph eventually contains a
    /// cycle, and every predecessor cycle has weight of the right sign.
    fn find_cycle(&self, s: SccId, sign: i64) -> Option<TransitionSeq> {
        let members = &self.members[s.0];
        let n = self.component_of.len();
        let mut dist = vec![0i64; n];
        let mut pred: Vec<Option<Transition>> = vec![None; n];
        loop {
            let mut changed = false;
            for &u in members {
                for t in &self.internal[u] {
                    let cand = dist[u] + sign * t.eff;
                    if cand > dist[t.dst] {
                        dist[t.dst] = cand;
                        pred[t.dst] = Some(*t);
                        changed = true;
                    }
                }
            }
            if !changed {
                return None;
            }
            if let Some(cycle) = predecessor_cycle(members, &pred) {
                debug_assert!(sign * crate::ocs::effect(&cycle) > 0);
                return Some(rotate_to_lowest(cycle));
            }
        }
    }
}

fn predecessor_cycle(members: &[StateId], pred: &[Option<Transition>]) -> Option<Vec<Transition>> {
    // 0 = unvisited, 1 = on current walk, 2 = done
    let mut mark = std::collections::HashMap::new();
    for &start in members {
        if mark.contains_key(&start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            match mark.get(&cur) {
                Some(1) => {
                    let mut cycle = Vec::new();
                    let mut v = cur;
                    loop {
                        let t = pred[v].expect("walk only follows defined predecessors");
                        cycle.push(t);
                        v = t.src;
                        if v == cur {
                            break;
                        }
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                Some(_) => break,
                None => {}
            }
            mark.insert(cur, 1u8);
            walk.push(cur);
            match pred[cur] {
                Some(t) => cur = t.src,
                None => break,
            }
        }
        for v in walk {
            mark.insert(v, 2);
        }
    }
    None
}

fn rotate_to_lowest(mut cycle: Vec<Transition>) -> TransitionSeq {
    let (i, _) = cycle.iter().enumerate().min_by_key(|(_, t)| t.src).expect("cycles are non-empty");
    cycle.rotate_left(i);
    TransitionSeq::new(cycle)
}

/// Iterative Tarjan over an adjacency list; returns components in
/// completion order.
fn tarjan(succ: &[Vec<StateId>]) -> Vec<Vec<StateId>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(StateId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}
