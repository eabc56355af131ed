use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ocs::{StateId, Transition, TransitionSeq};

/// Extended Euclid: `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Repeat counts `(a, b)` with `a*A - b*B = -K` and
/// `L <= a*A, b*B <= 2L + 2 lcm(A, B)`.
///
/// Requires `gcd(A, B) | K`. The upper bound is guaranteed when
/// `|K| <= L + lcm(A, B)`; a violated postcondition is reported as a
/// precondition error.
pub fn choose_ab(big_a: u64, big_b: u64, k: i64, l: u64) -> Result<(u64, u64)> {
    if big_a == 0 || big_b == 0 {
        return Err(Error::Precondition("A and B must be positive".into()));
    }
    let (a_, b_, k_, l_) = (big_a as i128, big_b as i128, k as i128, l as i128);
    let (g, x0, y0) = ext_gcd(a_, b_);
    if k_ % g != 0 {
        return Err(Error::Precondition(format!("gcd({big_a}, {big_b}) = {g} does not divide K = {k}")));
    }
    let lcm = a_ / g * b_;
    // x0*A - (-y0)*B = g, scaled to x*A - y*B = -K.
    let s = -k_ / g;
    let (mut x, mut y) = (x0 * s, -y0 * s);
    let (dx, dy) = (b_ / g, a_ / g);
    // Smallest shift making both nonnegative minimizes x + y.
    let t = Integer::div_ceil(&-x, &dx).max(Integer::div_ceil(&-y, &dy));
    x += t * dx;
    y += t * dy;
    // Each step adds lcm to both products.
    let need = |v: i128| if v >= l_ { 0 } else { Integer::div_ceil(&(l_ - v), &lcm) };
    let i = need(x * a_).max(need(y * b_));
    x += i * dx;
    y += i * dy;

    let upper = 2 * l_ + 2 * lcm;
    let ok = x >= 0
        && y >= 0
        && x * a_ - y * b_ == -k_
        && (l_..=upper).contains(&(x * a_))
        && (l_..=upper).contains(&(y * b_));
    if !ok {
        return Err(Error::Precondition(format!(
            "no admissible (a, b) from the Bezout construction for A={big_a}, B={big_b}, K={k}, L={l}"
        )));
    }
    let a = u64::try_from(x).map_err(|_| Error::Overflow("repeat count a"))?;
    let b = u64::try_from(y).map_err(|_| Error::Overflow("repeat count b"))?;
    Ok((a, b))
}

/// Excises infix cycles whose effect is divisible by `g` until none is
/// left. Source, target and the effect modulo `g` are preserved, and every
/// pair (state, prefix effect mod g) occurs at most once on the result.
pub fn unpump_mod_gcd(sigma: &TransitionSeq, g: u64) -> Result<TransitionSeq> {
    if g == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    if !sigma.is_consistent() {
        return Err(Error::Precondition("transition sequence is not consistent".into()));
    }
    let steps = sigma.steps();
    if steps.is_empty() {
        return Ok(TransitionSeq::empty());
    }
    let g = g as i64;
    let mut keys: Vec<(StateId, i64)> = Vec::with_capacity(steps.len() + 1);
    let mut acc = 0i64;
    keys.push((steps[0].src, 0));
    for t in steps {
        acc = (acc + t.eff).mod_floor(&g);
        keys.push((t.dst, acc));
    }
    let mut last = HashMap::with_capacity(keys.len());
    for (i, key) in keys.iter().enumerate() {
        last.insert(*key, i);
    }
    let mut out: Vec<Transition> = Vec::new();
    let mut pos = 0;
    loop {
        pos = last[&keys[pos]];
        if pos == steps.len() {
            break;
        }
        out.push(steps[pos]);
        pos += 1;
    }
    Ok(TransitionSeq::new(out))
}
