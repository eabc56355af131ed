//! Whole-path accounting for normalized paths: the per-part totals whose
//! sum gives the `14 n^2` bound, checked against their individual limits.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::NormalizedArc;
use crate::scc::{SccAnalysis, SccId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AmortizationReport {
    /// Low arcs plus all prefixes and suffixes.
    pub low_total: usize,
    pub cap_total: usize,
    pub up_total: usize,
    pub down_total: usize,
    /// Number of normal arcs per (S, T) component pair.
    pub pair_counts: BTreeMap<(SccId, SccId), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmortizationViolation {
    LowParts {
        total: usize,
        bound: usize,
    },
    Caps {
        total: usize,
        bound: usize,
    },
    Up {
        total: usize,
        bound: usize,
    },
    Down {
        total: usize,
        bound: usize,
    },
    PairCount {
        s: SccId,
        t: SccId,
        count: usize,
        gcd: u64,
    },
    /// Two caps of different arcs share a state at counters congruent
    /// modulo `gcd(A_S, B_T)`.
    CapResidue {
        first_arc: usize,
        second_arc: usize,
        state: usize,
    },
}

impl fmt::Display for AmortizationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LowParts { total, bound } => write!(f, "low parts total {total} > {bound}"),
            Self::Caps { total, bound } => write!(f, "caps total {total} > {bound}"),
            Self::Up { total, bound } => write!(f, "up parts total {total} > {bound}"),
            Self::Down { total, bound } => write!(f, "down parts total {total} > {bound}"),
            Self::PairCount { s, t, count, gcd } => {
                write!(f, "{count} normal arcs for ({s}, {t}), more than gcd {gcd}")
            }
            Self::CapResidue { first_arc, second_arc, state } => {
                write!(f, "caps of arcs {first_arc} and {second_arc} collide in state {state}")
            }
        }
    }
}

/// Tallies the parts of consecutive normalized arcs of one path and checks
/// each total. `check_residues` enables the quadratic cross-cap scan.
pub fn check_amortization(
    n: usize,
    analysis: &SccAnalysis,
    arcs: &[NormalizedArc],
    check_residues: bool,
) -> Result<AmortizationReport, (AmortizationReport, Vec<AmortizationViolation>)> {
    let mut report = AmortizationReport::default();
    for arc in arcs {
        match &arc.decomposition {
            None => report.low_total += arc.path.len(),
            Some(d) => {
                report.low_total += d.pref.len() + d.suff.len();
                report.cap_total += d.cap.len();
                report.up_total += d.up.len();
                report.down_total += d.down.len();
                *report.pair_counts.entry((d.s, d.t)).or_default() += 1;
            }
        }
    }

    let mut bad = Vec::new();
    let sq = n * n;
    if report.low_total > 5 * sq {
        bad.push(AmortizationViolation::LowParts { total: report.low_total, bound: 5 * sq });
    }
    if report.cap_total > sq {
        bad.push(AmortizationViolation::Caps { total: report.cap_total, bound: sq });
    }
    if report.up_total > 4 * sq {
        bad.push(AmortizationViolation::Up { total: report.up_total, bound: 4 * sq });
    }
    if report.down_total > 4 * sq {
        bad.push(AmortizationViolation::Down { total: report.down_total, bound: 4 * sq });
    }
    for (&(s, t), &count) in &report.pair_counts {
        let g = pair_gcd(analysis, s, t);
        if count as u64 > g {
            bad.push(AmortizationViolation::PairCount { s, t, count, gcd: g });
        }
    }
    if check_residues {
        bad.extend(cap_residues(analysis, arcs));
    }

    if bad.is_empty() {
        Ok(report)
    } else {
        Err((report, bad))
    }
}

fn pair_gcd(analysis: &SccAnalysis, s: SccId, t: SccId) -> u64 {
    let a = analysis.sigma_plus(s).map_or(0, |c| c.effect());
    let b = analysis.sigma_minus(t).map_or(0, |c| -c.effect());
    a.gcd(&b) as u64
}

fn cap_residues(analysis: &SccAnalysis, arcs: &[NormalizedArc]) -> Vec<AmortizationViolation> {
    let mut out = Vec::new();
    for (i, earlier) in arcs.iter().enumerate() {
        let Some(di) = &earlier.decomposition else { continue };
        for (j, later) in arcs.iter().enumerate().skip(i + 1) {
            let Some(dj) = &later.decomposition else { continue };
            let g = pair_gcd(analysis, di.s, dj.t) as i64;
            'scan: for x in di.cap.configs() {
                for y in dj.cap.configs() {
                    if x.state == y.state && (x.counter as i64 - y.counter as i64) % g == 0 {
                        out.push(AmortizationViolation::CapResidue { first_arc: i, second_arc: j, state: x.state });
                        break 'scan;
                    }
                }
            }
        }
    }
    out
}
