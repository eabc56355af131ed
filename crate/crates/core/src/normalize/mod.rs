//! Constructive normalization: every arc becomes either the shortest low arc
//! or a normal arc `pref . up . cap . down . suff`, and a whole zero-to-zero
//! path is rebuilt from normalized arcs within `14 n^2` steps.

mod amortization;
mod arc;
mod arith;
mod verify;

pub use amortization::{check_amortization, AmortizationReport, AmortizationViolation};
pub use arc::normalize_arc;
pub use arith::{choose_ab, ext_gcd, unpump_mod_gcd};
pub use verify::{verify_normal, NormalCondition, NormalViolation};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ocs::{split_arcs, Config, Ocs, Path};
use crate::reach::{min_zero_path, zero_bound};
use crate::scc::{SccAnalysis, SccId};

/// The five parts of a normal arc together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalDecomposition {
    pub pref: Path,
    pub up: Path,
    pub cap: Path,
    pub down: Path,
    pub suff: Path,
    /// Component whose positive cycle is pumped on `up`.
    pub s: SccId,
    /// Component whose negative cycle is pumped on `down`.
    pub t: SccId,
    /// `A`, the effect of the positive cycle of `s`.
    pub eff_up: u64,
    /// `B`, minus the effect of the negative cycle of `t`.
    pub eff_down: u64,
    /// Copies of the positive cycle on `up`.
    pub a: u64,
    /// Copies of the negative cycle on `down`.
    pub b: u64,
    /// `eff(pref) + eff(cap) + eff(suff)`.
    pub k: i64,
    /// `len(cap)`.
    pub l: usize,
}

impl NormalDecomposition {
    pub fn parts(&self) -> [&Path; 5] {
        [&self.pref, &self.up, &self.cap, &self.down, &self.suff]
    }

    pub fn assemble(&self) -> Result<Path> {
        Path::concat_all(self.parts())
    }
}

/// An arc after normalization. `decomposition` is `None` for a low arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedArc {
    pub path: Path,
    pub decomposition: Option<NormalDecomposition>,
}

impl NormalizedArc {
    pub fn is_low(&self) -> bool {
        self.decomposition.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPath {
    pub path: Path,
    pub arcs: Vec<NormalizedArc>,
}

/// A path from `alpha` to `beta` (both at counter 0) of length at most
/// `14 n^2`, obtained by normalizing each arc of a zero-minimal path.
pub fn normalize_path(ocs: &Ocs, alpha: Config, beta: Config) -> Result<NormalizedPath> {
    let analysis = SccAnalysis::analyze(ocs);
    normalize_path_with(ocs, &analysis, alpha, beta)
}

/// As [`normalize_path`], reusing a precomputed analysis of `ocs`.
pub fn normalize_path_with(ocs: &Ocs, analysis: &SccAnalysis, alpha: Config, beta: Config) -> Result<NormalizedPath> {
    let base = min_zero_path(ocs, alpha, beta)?.ok_or(Error::Unreachable)?;
    if base.is_empty() {
        return Ok(NormalizedPath { path: base, arcs: Vec::new() });
    }
    let arcs = split_arcs(&base)?.iter().map(|arc| normalize_arc(ocs, analysis, arc)).collect::<Result<Vec<_>>>()?;
    let path = Path::concat_all(arcs.iter().map(|a| &a.path))?;

    let bound = zero_bound(ocs.n())?;
    if path.len() as u64 > bound {
        return Err(Error::Internal(format!("normalized path has length {} > 14n^2 = {bound}", path.len())));
    }
    if path.src() != alpha || path.targ() != beta {
        return Err(Error::Internal("normalized path has wrong endpoints".into()));
    }
    if path.intermediate_zeros() != base.intermediate_zeros() {
        return Err(Error::Internal("normalization changed the number of zero configurations".into()));
    }
    Ok(NormalizedPath { path, arcs })
}
