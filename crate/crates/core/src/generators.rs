//! Lower-bound families and seeded random instances.
//!
//! Random instances use ChaCha8 seeded with `seed_from_u64`, and candidate
//! transitions are drawn in a fixed order (source, then effect, then
//! target), so the same arguments always give the same system.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oca::{LabeledTransition, Oca};
use crate::ocs::{default_names, Config, Ocs, Transition};
use crate::zcounter::{ZGuard, ZOcs, ZTransition};

/// A generated system with the query it is meant for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub ocs: Ocs,
    pub source: Config,
    pub target: Config,
}

fn names(prefix: &str, range: impl Iterator<Item = usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}_{i}")).collect()
}

/// Adds the `2n`-state core: `p_i -> p_{i+1}` incrementing (the first one a
/// zero test), `p_n -> q_1`, and the decrementing cycle over `q_1..q_n`.
/// `p` and `q` give the index of `p_1` and `q_1`.
fn deterministic_core(ts: &mut Vec<Transition>, n: usize, p: usize, q: usize) {
    for i in 0..n - 1 {
        if i == 0 {
            ts.push(Transition::zero_test(p, 1, p + 1));
        } else {
            ts.push(Transition::positive(p + i, 1, p + i + 1));
        }
        ts.push(Transition::positive(q + i, 0, q + i + 1));
    }
    ts.push(Transition::positive(q + n - 1, -1, q));
    ts.push(Transition::positive(p + n - 1, 0, q));
}

/// States `p_1..p_n, q_1..q_n`; the only path from `(p_1, 0)` to `(q_1, 0)`
/// has length `n^2`.
pub fn example1(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Precondition("example1 needs n >= 2".into()));
    }
    let mut st = names("p", 1..=n);
    st.extend(names("q", 1..=n));
    let mut ts = Vec::new();
    deterministic_core(&mut ts, n, 0, n);
    let ocs = Ocs::from_parts(st, ts)?;
    debug_assert!(ocs.is_deterministic());
    Ok(Instance { ocs, source: Config::new(0, 0), target: Config::new(n, 0) })
}

/// States `p_0..p_{k-1}, q_0..q_{m-1}, s_1, s_2`; the shortest path from
/// `(p_0, 0)` to `(s_2, 0)` has length `2km + 2` and climbs to `km`.
pub fn example2(k: usize, m: usize) -> Result<Instance> {
    if k < 2 || m < 2 {
        return Err(Error::Precondition("example2 needs k, m >= 2".into()));
    }
    if num_integer::gcd(k, m) != 1 {
        return Err(Error::Precondition(format!("k = {k} and m = {m} are not coprime")));
    }
    let mut st = names("p", 0..k);
    st.extend(names("q", 0..m));
    st.push("s_1".into());
    st.push("s_2".into());
    let (p, q, s1, s2) = (0, k, k + m, k + m + 1);
    let mut ts = Vec::new();
    for i in 0..k {
        ts.push(Transition::positive(p + i, 1, p + (i + 1) % k));
    }
    for j in 0..m {
        ts.push(Transition::positive(q + j, -1, q + (j + 1) % m));
    }
    ts.push(Transition::positive(p, 0, q));
    ts.push(Transition::positive(q + m - 1, -1, s1));
    ts.push(Transition::zero_test(p, 1, p + 1));
    ts.push(Transition::zero_test(s1, 0, s2));
    Ok(Instance { ocs: Ocs::from_parts(st, ts)?, source: Config::new(p, 0), target: Config::new(s2, 0) })
}

/// The first example extended by chains `a_1..a_n` and `b_1..b_n`; every
/// path from `(a_1, c_alpha)` to `(b_n, c_beta)` has length at least
/// `n^2 + n (c_alpha + c_beta + 2)`.
pub fn example3(n: usize, c_alpha: u64, c_beta: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Precondition("example3 needs n >= 2".into()));
    }
    let mut st = names("p", 1..=n);
    st.extend(names("q", 1..=n));
    st.extend(names("a", 1..=n));
    st.extend(names("b", 1..=n));
    let (p, q, a, b) = (0, n, 2 * n, 3 * n);
    let mut ts = Vec::new();
    deterministic_core(&mut ts, n, p, q);
    ts.push(Transition::positive(a + n - 1, -1, a));
    let mut doubled = vec![Transition::positive(b + n - 1, 1, b)];
    for i in 0..n - 1 {
        doubled.push(Transition::positive(a + i, 0, a + i + 1));
        doubled.push(Transition::positive(b + i, 0, b + i + 1));
    }
    for t in doubled {
        ts.push(t);
        ts.push(Transition::zero_test(t.src, t.eff, t.dst));
    }
    ts.push(Transition::zero_test(a + n - 1, 0, p));
    ts.push(Transition::zero_test(q, 0, b));
    Ok(Instance {
        ocs: Ocs::from_parts(st, ts)?,
        source: Config::new(a, c_alpha),
        target: Config::new(b + n - 1, c_beta),
    })
}

/// An automaton over `{a}` with `2s + 1` states whose language is exactly
/// `{a^(s^2)}`: the first example with every step reading `a`, followed by
/// a silent zero test into the only final state.
pub fn counting_oca(s: usize) -> Result<Oca> {
    let base = example1(s)?;
    let mut st = base.ocs.names().to_vec();
    st.push("f".into());
    let f = 2 * s;
    let mut ts: Vec<LabeledTransition> =
        base.ocs.transitions().iter().map(|t| LabeledTransition::new(*t, Some("a"))).collect();
    ts.push(LabeledTransition::new(Transition::zero_test(base.target.state, 0, f), None));
    Oca::new(st, vec!["a".into()], ts, vec![base.source.state], vec![f])
}

fn check_density(d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Precondition(format!("density {d} is outside [0, 1]")));
    }
    Ok(())
}

fn random_transitions(rng: &mut ChaCha8Rng, n: usize, pos: f64, zero: f64) -> Vec<Transition> {
    let mut ts = Vec::new();
    for src in 0..n {
        for eff in -1..=1 {
            for dst in 0..n {
                if rng.random_bool(pos) {
                    ts.push(Transition::positive(src, eff, dst));
                }
            }
        }
        for eff in 0..=1 {
            for dst in 0..n {
                if rng.random_bool(zero) {
                    ts.push(Transition::zero_test(src, eff, dst));
                }
            }
        }
    }
    ts
}

/// Each candidate transition is present independently with the given
/// probability.
pub fn random_ocs(n: usize, pos_density: f64, zero_density: f64, seed: u64) -> Result<Ocs> {
    check_density(pos_density)?;
    check_density(zero_density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ocs::from_parts(default_names(n), random_transitions(&mut rng, n, pos_density, zero_density))
}

/// A random automaton over `{a, b}`. Each transition reads the empty word
/// with probability `epsilon`, otherwise a uniform letter. State 0 is
/// initial; every state is final with probability 1/4, and at least one is.
pub fn random_oca(n: usize, pos_density: f64, zero_density: f64, epsilon: f64, seed: u64) -> Result<Oca> {
    check_density(pos_density)?;
    check_density(zero_density)?;
    check_density(epsilon)?;
    if n == 0 {
        return Err(Error::Precondition("random_oca needs at least one state".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = random_transitions(&mut rng, n, pos_density, zero_density);
    let labeled: Vec<LabeledTransition> = ts
        .into_iter()
        .map(|t| {
            let label = if rng.random_bool(epsilon) {
                None
            } else if rng.random_bool(0.5) {
                Some("a")
            } else {
                Some("b")
            };
            LabeledTransition::new(t, label)
        })
        .collect();
    let mut finals: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.25)).collect();
    if finals.is_empty() {
        finals.push(rng.random_range(0..n));
    }
    Oca::new(default_names(n), vec!["a".into(), "b".into()], labeled, vec![0], finals)
}

/// Each candidate transition (any guard, any effect in {-1, 0, 1}) is
/// present independently with probability `density`.
pub fn random_zocs(n: usize, density: f64, seed: u64) -> Result<ZOcs> {
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ts = Vec::new();
    for src in 0..n {
        for guard in [ZGuard::Positive, ZGuard::Negative, ZGuard::Zero] {
            for eff in -1..=1 {
                for dst in 0..n {
                    if rng.random_bool(density) {
                        ts.push(ZTransition::new(src, eff, dst, guard));
                    }
                }
            }
        }
    }
    ZOcs::new(default_names(n), ts)
}

/// A random system in which the positive, negative and zero-guarded
/// transition sets coincide, so the counter sign is irrelevant.
pub fn random_unguarded_zocs(n: usize, density: f64, seed: u64) -> Result<ZOcs> {
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ts = Vec::new();
    for src in 0..n {
        for eff in -1..=1 {
            for dst in 0..n {
                if rng.random_bool(density) {
                    for guard in [ZGuard::Positive, ZGuard::Negative, ZGuard::Zero] {
                        ts.push(ZTransition::new(src, eff, dst, guard));
                    }
                }
            }
        }
    }
    ZOcs::new(default_names(n), ts)
}
