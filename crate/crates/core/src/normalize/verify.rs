//! Independent checker for normal decompositions. It only relies on the
//! system, the component analysis and the decomposition itself.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use super::NormalDecomposition;
use crate::ocs::{validate_path, Ocs, Path};
use crate::scc::SccAnalysis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalCondition {
    /// Each part is a valid path and the parts join into an arc.
    Concatenation,
    /// Components, cycle effects, `K` and `L` match the parts.
    Parameters,
    /// (i) `up` projects to `a` copies of the positive cycle.
    UpCycles,
    /// (ii) `down` projects to `b` copies of the negative cycle.
    DownCycles,
    /// (iii) `a*A <= 2 len(cap) + 2 lcm(A, B)`.
    UpBound,
    /// (iv) `b*B <= 2 len(cap) + 2 lcm(A, B)`.
    DownBound,
    /// (v) no infix of the cap is a cycle with effect divisible by `gcd(A, B)`.
    CapInfix,
    /// (vi) counters above `n` at the end of `up` and the start of `down`.
    HighAnchors,
    /// (vii) configurations on `pref` and `suff` are pairwise different.
    PrefSuffDistinct,
    /// `pref` and `suff` stay below `5n`.
    LowPrefSuff,
    /// The cap runs from the base of the positive cycle to the base of the
    /// negative one.
    CapEndpoints,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalViolation {
    pub condition: NormalCondition,
    pub detail: String,
}

impl fmt::Display for NormalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.condition, self.detail)
    }
}

/// Re-checks every condition of a normal decomposition.
pub fn verify_normal(ocs: &Ocs, analysis: &SccAnalysis, d: &NormalDecomposition) -> Result<(), Vec<NormalViolation>> {
    let mut out = Vec::new();
    let mut fail = |condition, detail: String| out.push(NormalViolation { condition, detail });
    let n = ocs.n() as u64;

    let parts = [("pref", &d.pref), ("up", &d.up), ("cap", &d.cap), ("down", &d.down), ("suff", &d.suff)];
    for (name, p) in parts {
        if let Err(v) = validate_path(ocs, p) {
            fail(NormalCondition::Concatenation, format!("{name} is not a valid path ({v})"));
        }
    }
    for w in parts.windows(2) {
        if w[0].1.targ() != w[1].1.src() {
            fail(
                NormalCondition::Concatenation,
                format!("{} ends in {} but {} starts in {}", w[0].0, w[0].1.targ(), w[1].0, w[1].1.src()),
            );
        }
    }
    if let Ok(whole) = d.assemble() {
        if !whole.is_arc() {
            fail(NormalCondition::Concatenation, "the assembled path is not an arc".into());
        }
    }

    let (Some(plus), Some(minus)) = (
        (d.s.0 < analysis.count()).then(|| analysis.sigma_plus(d.s)).flatten(),
        (d.t.0 < analysis.count()).then(|| analysis.sigma_minus(d.t)).flatten(),
    ) else {
        fail(NormalCondition::Parameters, format!("{} or {} lacks the required cycle", d.s, d.t));
        return Err(out);
    };
    let big_a = plus.effect();
    let big_b = -minus.effect();
    if big_a != d.eff_up as i64 || big_b != d.eff_down as i64 {
        fail(
            NormalCondition::Parameters,
            format!("cycle effects are {big_a}, {big_b}; recorded {}, {}", d.eff_up, d.eff_down),
        );
    }
    let k = d.pref.effect() + d.cap.effect() + d.suff.effect();
    if k != d.k || d.cap.len() != d.l {
        fail(NormalCondition::Parameters, format!("K = {k}, L = {}; recorded {}, {}", d.cap.len(), d.k, d.l));
    }
    if big_a <= 0 || big_b <= 0 {
        return Err(out);
    }

    if d.up.steps() != plus.repeat(d.a as usize).steps() {
        fail(NormalCondition::UpCycles, format!("up is not {} copies of the positive cycle", d.a));
    }
    if d.down.steps() != minus.repeat(d.b as usize).steps() {
        fail(NormalCondition::DownCycles, format!("down is not {} copies of the negative cycle", d.b));
    }

    let g = big_a.gcd(&big_b);
    let limit = 2 * d.cap.len() as i64 + 2 * big_a.lcm(&big_b);
    if d.a as i64 * big_a > limit {
        fail(NormalCondition::UpBound, format!("a*A = {} > {limit}", d.a as i64 * big_a));
    }
    if d.b as i64 * big_b > limit {
        fail(NormalCondition::DownBound, format!("b*B = {} > {limit}", d.b as i64 * big_b));
    }

    if let Some((i, j)) = divisible_cycle(&d.cap, g) {
        fail(NormalCondition::CapInfix, format!("cap positions {i}..{j} form a cycle with effect divisible by {g}"));
    }

    if d.up.targ().counter <= n || d.down.src().counter <= n {
        fail(NormalCondition::HighAnchors, format!("anchors {} and {} must exceed {n}", d.up.targ(), d.down.src()));
    }

    let mut seen = HashSet::new();
    for c in d.pref.configs().iter().chain(d.suff.configs()) {
        if !seen.insert(*c) {
            fail(NormalCondition::PrefSuffDistinct, format!("{c} appears twice on pref and suff"));
            break;
        }
    }

    if !d.pref.is_below(5 * n) || !d.suff.is_below(5 * n) {
        fail(NormalCondition::LowPrefSuff, format!("pref or suff reaches {}", 5 * n));
    }

    if Some(d.cap.src().state) != plus.src() || Some(d.cap.targ().state) != minus.src() {
        fail(
            NormalCondition::CapEndpoints,
            format!("cap runs {} -> {}, bases are {:?} and {:?}", d.cap.src(), d.cap.targ(), plus.src(), minus.src()),
        );
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Quadratic scan for positions `i < j` with the same state and counter
/// difference divisible by `g`.
fn divisible_cycle(p: &Path, g: i64) -> Option<(usize, usize)> {
    let cs = p.configs();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if cs[i].state == cs[j].state && (cs[j].counter as i64 - cs[i].counter as i64) % g == 0 {
                return Some((i, j));
            }
        }
    }
    None
}
