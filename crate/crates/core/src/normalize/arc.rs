use std::collections::HashMap;

use num_integer::Integer;

use super::arith::{choose_ab, unpump_mod_gcd};
use super::verify::verify_normal;
use super::{NormalDecomposition, NormalizedArc};
use crate::error::{Error, Result};
use crate::ocs::{fasten, remove_repeats, validate_path, Config, Ocs, Path, StateId, TransitionSeq};
use crate::reach::shortest_low_arc;
use crate::scc::{SccAnalysis, SccId};

/// Replaces `arc` by the shortest low arc between its endpoints if one
/// exists, and otherwise by a normal arc with the same endpoints.
pub fn normalize_arc(ocs: &Ocs, analysis: &SccAnalysis, arc: &Path) -> Result<NormalizedArc> {
    if let Err(v) = validate_path(ocs, arc) {
        return Err(Error::Precondition(format!("input is not a valid path: {v}")));
    }
    if !arc.is_arc() {
        return Err(Error::Precondition("input is not an arc".into()));
    }
    let (alpha, beta) = (arc.src(), arc.targ());
    if let Some(low) = shortest_low_arc(ocs, alpha, beta)? {
        return Ok(NormalizedArc { path: low, decomposition: None });
    }

    let d = decompose(ocs, analysis, &remove_repeats(arc))?;
    if let Err(violations) = verify_normal(ocs, analysis, &d) {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::Internal(format!("normal decomposition is broken: {}", list.join("; "))));
    }
    let path = d.assemble()?;
    if path.src() != alpha || path.targ() != beta {
        return Err(Error::Internal("normal arc has wrong endpoints".into()));
    }
    Ok(NormalizedArc { path, decomposition: Some(d) })
}

/// One side of the arc: the level at which it is cut, the state there, the
/// component holding the pigeonhole cycle and the connectives to the base.
struct Side {
    index: usize,
    level: u64,
    comp: SccId,
    cycle: TransitionSeq,
    /// From the cut state to the base.
    to_base: TransitionSeq,
    /// From the base to the cut state.
    from_base: TransitionSeq,
}

/// Scans levels `2n..=3n` at the positions chosen by `pos` and returns the
/// first level whose state repeats an earlier one, paired with that earlier
/// level.
fn pigeonhole(configs: &[Config], pos: &[usize], lo: u64) -> Result<(u64, u64, StateId)> {
    let mut seen: HashMap<StateId, u64> = HashMap::new();
    for (off, &i) in pos.iter().enumerate() {
        let level = lo + off as u64;
        let q = configs[i].state;
        if let Some(&earlier) = seen.get(&q) {
            return Ok((earlier, level, q));
        }
        seen.insert(q, level);
    }
    Err(Error::Internal("no repeated state among levels 2n..3n".into()))
}

fn side(analysis: &SccAnalysis, index: usize, level: u64, p: StateId, positive: bool) -> Result<Side> {
    let comp = analysis.component_of(p);
    let cycle = if positive { analysis.sigma_plus(comp) } else { analysis.sigma_minus(comp) };
    let cycle =
        cycle.cloned().ok_or_else(|| Error::Internal(format!("component {comp} has no cycle of the required sign")))?;
    let q = cycle.src().expect("cycles are non-empty");
    Ok(Side {
        index,
        level,
        comp,
        to_base: analysis.connective(comp, p, q)?,
        from_base: analysis.connective(comp, q, p)?,
        cycle,
    })
}

fn counter_after(c: u64, eff: i64) -> Result<u64> {
    c.checked_add_signed(eff).ok_or_else(|| Error::Internal("counter would become negative".into()))
}

fn decompose(ocs: &Ocs, analysis: &SccAnalysis, rho: &Path) -> Result<NormalDecomposition> {
    let n = ocs.n() as u64;
    let configs = rho.configs();
    if rho.is_below(5 * n) {
        return Err(Error::Internal("arc is low although no low arc exists".into()));
    }

    let (lo, hi) = (2 * n, 3 * n);
    let mut first = Vec::new();
    let mut last = Vec::new();
    for k in lo..=hi {
        let i = configs.iter().position(|c| c.counter == k);
        let j = configs.iter().rposition(|c| c.counter == k);
        let (Some(i), Some(j)) = (i, j) else {
            return Err(Error::Internal(format!("level {k} is never visited")));
        };
        first.push(i);
        last.push(j);
    }

    // Prefix side: cut at the lower of the two levels.
    let (k, _, p) = pigeonhole(configs, &first, lo)?;
    let up = side(analysis, first[(k - lo) as usize], k, p, true)?;
    // Suffix side: cut at the higher of the two levels.
    let (_, k_bar, p_bar) = pigeonhole(configs, &last, lo)?;
    let down = side(analysis, last[(k_bar - lo) as usize], k_bar, p_bar, false)?;

    let big_a = up.cycle.effect() as u64;
    let big_b = (-down.cycle.effect()) as u64;

    let pref2 = rho.slice(0, up.index).concat(&fasten(configs[up.index], up.to_base.steps())?)?;
    let q_bar = down.cycle.src().expect("cycles are non-empty");
    let entry = Config::new(q_bar, counter_after(down.level, -down.from_base.effect())?);
    let suff2 = fasten(entry, down.from_base.steps())?.concat(&rho.slice(down.index, rho.len()))?;

    // Balance the anchors so they differ by less than max(A, B).
    let (x, y) = (pref2.targ().counter, suff2.src().counter);
    let mut pref1 = pref2;
    let mut suff1 = suff2;
    if x + big_a <= y {
        let times = (y - x) / big_a;
        let pump = fasten(pref1.targ(), up.cycle.repeat(times as usize).steps())?;
        pref1 = pref1.concat(&pump)?;
    } else if x >= y + big_b {
        let times = (x - y) / big_b;
        let start = Config::new(q_bar, y + times * big_b);
        let pump = fasten(start, down.cycle.repeat(times as usize).steps())?;
        suff1 = pump.concat(&suff1)?;
    }
    let pref = remove_repeats(&pref1);
    let suff = remove_repeats(&suff1);
    let zeta = pref.targ();
    let zeta_bar = suff.src();

    let g = big_a.gcd(&big_b);
    let c = (g - 1) as usize;
    let pre_conn = up.to_base.concat(&up.from_base);
    let post_conn = down.to_base.concat(&down.from_base);
    let midd = TransitionSeq::new(rho.steps()[up.index..down.index].to_vec());
    let raw_cap =
        up.from_base.concat(&pre_conn.repeat(c)).concat(&midd).concat(&post_conn.repeat(c)).concat(&down.to_base);
    let sigma_cap = unpump_mod_gcd(&raw_cap, g)?;

    let k_sum = pref.effect() + sigma_cap.effect() + suff.effect();
    let (a, b) = choose_ab(big_a, big_b, k_sum, sigma_cap.len() as u64)?;

    let up_path = fasten(zeta, up.cycle.repeat(a as usize).steps())?;
    let cap = fasten(up_path.targ(), sigma_cap.steps())?;
    let down_start = zeta_bar.counter.checked_add(b * big_b).ok_or(Error::Overflow("start of down"))?;
    let down_path = fasten(Config::new(q_bar, down_start), down.cycle.repeat(b as usize).steps())?;
    if cap.targ() != down_path.src() {
        return Err(Error::Internal(format!("cap ends in {} but down starts in {}", cap.targ(), down_path.src())));
    }

    Ok(NormalDecomposition {
        pref,
        up: up_path,
        l: cap.len(),
        cap,
        down: down_path,
        suff,
        s: up.comp,
        t: down.comp,
        eff_up: big_a,
        eff_down: big_b,
        a,
        b,
        k: k_sum,
    })
}
