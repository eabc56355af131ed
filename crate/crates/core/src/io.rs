//! JSON documents for systems and paths.
//!
//! Serialization is canonical: keys appear in a fixed order, output is
//! pretty-printed and ends with a newline. States are referred to by name.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::normalize::NormalizedPath;
use crate::oca::{LabeledTransition, Oca};
use crate::ocs::{validate_path, Config, Guard, Ocs, Path, Transition};
use crate::zcounter::{ZConfig, ZGuard, ZOcs, ZPath, ZTransition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema { field: field.into(), message: message.into() }
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ocs,
    Oca,
    Zocs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GuardName {
    Pos,
    Zero,
    Neg,
}

/// Distinguishes an absent `label` key from an explicit `null`.
fn present<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Option<String>>, D::Error> {
    Option::<String>::deserialize(d).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub src: String,
    pub eff: i64,
    pub dst: String,
    pub guard: GuardName,
    /// Only for automata; `Some(None)` is the empty word.
    #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "present")]
    pub label: Option<Option<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub kind: Kind,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<String>>,
    #[serde(default, rename = "final", skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
    pub transitions: Vec<TransitionRecord>,
}

/// A parsed and checked system of any kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum System {
    Ocs(Ocs),
    Oca(Oca),
    Zocs(ZOcs),
}

impl System {
    pub fn kind(&self) -> Kind {
        match self {
            System::Ocs(_) => Kind::Ocs,
            System::Oca(_) => Kind::Oca,
            System::Zocs(_) => Kind::Zocs,
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            System::Ocs(o) => o.names(),
            System::Oca(a) => a.ocs().names(),
            System::Zocs(z) => z.names(),
        }
    }

    pub fn to_document(&self) -> SystemDocument {
        match self {
            System::Ocs(o) => SystemDocument::from_ocs(o),
            System::Oca(a) => SystemDocument::from_oca(a),
            System::Zocs(z) => SystemDocument::from_zocs(z),
        }
    }
}

fn positive_guard(g: Guard) -> GuardName {
    match g {
        Guard::Positive => GuardName::Pos,
        Guard::Zero => GuardName::Zero,
    }
}

impl SystemDocument {
    pub fn from_ocs(ocs: &Ocs) -> Self {
        let n = ocs.names();
        let transitions = ocs
            .transitions()
            .iter()
            .map(|t| TransitionRecord {
                src: n[t.src].clone(),
                eff: t.eff,
                dst: n[t.dst].clone(),
                guard: positive_guard(t.guard),
                label: None,
            })
            .collect();
        SystemDocument { kind: Kind::Ocs, states: n.to_vec(), alphabet: None, initial: None, finals: None, transitions }
    }

    pub fn from_oca(oca: &Oca) -> Self {
        let n = oca.ocs().names();
        let transitions = oca
            .transitions()
            .iter()
            .map(|lt| TransitionRecord {
                src: n[lt.transition.src].clone(),
                eff: lt.transition.eff,
                dst: n[lt.transition.dst].clone(),
                guard: positive_guard(lt.transition.guard),
                label: Some(lt.label.clone()),
            })
            .collect();
        let pick = |qs: &[usize]| Some(qs.iter().map(|&q| n[q].clone()).collect());
        SystemDocument {
            kind: Kind::Oca,
            states: n.to_vec(),
            alphabet: Some(oca.alphabet().to_vec()),
            initial: pick(oca.initial()),
            finals: pick(oca.finals()),
            transitions,
        }
    }

    pub fn from_zocs(z: &ZOcs) -> Self {
        let n = z.names();
        let transitions = z
            .transitions()
            .iter()
            .map(|t| TransitionRecord {
                src: n[t.src].clone(),
                eff: t.eff,
                dst: n[t.dst].clone(),
                guard: match t.guard {
                    ZGuard::Positive => GuardName::Pos,
                    ZGuard::Zero => GuardName::Zero,
                    ZGuard::Negative => GuardName::Neg,
                },
                label: None,
            })
            .collect();
        SystemDocument {
            kind: Kind::Zocs,
            states: n.to_vec(),
            alphabet: None,
            initial: None,
            finals: None,
            transitions,
        }
    }

    /// Parses and checks a document.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: SystemDocument = serde_json::from_str(text)?;
        doc.check()?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    fn state_map(&self) -> Result<HashMap<&str, usize>, DocumentError> {
        if self.states.is_empty() {
            return Err(schema("states", "at least one state is required"));
        }
        let mut map = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if map.insert(s.as_str(), i).is_some() {
                return Err(schema(format!("states[{i}]"), format!("duplicate state {s:?}")));
            }
        }
        Ok(map)
    }

    fn check(&self) -> Result<(), DocumentError> {
        let map = self.state_map()?;
        let is_oca = self.kind == Kind::Oca;
        for (key, value) in [("alphabet", &self.alphabet), ("initial", &self.initial), ("final", &self.finals)] {
            match (is_oca, value) {
                (true, None) => return Err(schema(key, "required for kind \"oca\"")),
                (false, Some(_)) => return Err(schema(key, "only allowed for kind \"oca\"")),
                _ => {}
            }
        }
        for (key, list) in [("initial", &self.initial), ("final", &self.finals)] {
            for (i, s) in list.iter().flatten().enumerate() {
                if !map.contains_key(s.as_str()) {
                    return Err(schema(format!("{key}[{i}]"), format!("unknown state {s:?}")));
                }
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            let field = format!("transitions[{i}]");
            let named = format!("{field} ({} -> {})", t.src, t.dst);
            for (key, s) in [("src", &t.src), ("dst", &t.dst)] {
                if !map.contains_key(s.as_str()) {
                    return Err(schema(format!("{field}.{key}"), format!("unknown state {s:?}")));
                }
            }
            if !(-1..=1).contains(&t.eff) {
                return Err(schema(format!("{field}.eff"), format!("effect {} is not -1, 0 or 1", t.eff)));
            }
            if self.kind != Kind::Zocs {
                if t.guard == GuardName::Neg {
                    return Err(schema(named, "guard \"neg\" requires kind \"zocs\""));
                }
                if t.guard == GuardName::Zero && t.eff < 0 {
                    return Err(schema(named, "a zero test cannot decrement"));
                }
            }
            match (&t.label, is_oca) {
                (None, true) => return Err(schema(format!("{field}.label"), "required for kind \"oca\"")),
                (Some(_), false) => return Err(schema(format!("{field}.label"), "only allowed for kind \"oca\"")),
                (Some(Some(sym)), true) if !self.alphabet.iter().flatten().any(|a| a == sym) => {
                    return Err(schema(format!("{field}.label"), format!("symbol {sym:?} is not in the alphabet")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Checks the document and builds the system it describes.
    pub fn to_system(&self) -> Result<System, DocumentError> {
        self.check()?;
        let map = self.state_map()?;
        let invalid = |e: crate::Error| schema("transitions", e.to_string());
        let plain = |t: &TransitionRecord| {
            let (src, dst) = (map[t.src.as_str()], map[t.dst.as_str()]);
            match t.guard {
                GuardName::Zero => Transition::zero_test(src, t.eff, dst),
                _ => Transition::positive(src, t.eff, dst),
            }
        };
        let states = self.states.clone();
        Ok(match self.kind {
            Kind::Ocs => System::Ocs(Ocs::from_parts(states, self.transitions.iter().map(plain)).map_err(invalid)?),
            Kind::Oca => {
                let ts = self
                    .transitions
                    .iter()
                    .map(|t| LabeledTransition::new(plain(t), t.label.as_ref().and_then(|l| l.as_deref())));
                let ids = |v: &Option<Vec<String>>| v.iter().flatten().map(|s| map[s.as_str()]).collect();
                let alphabet = self.alphabet.clone().unwrap_or_default();
                System::Oca(Oca::new(states, alphabet, ts, ids(&self.initial), ids(&self.finals)).map_err(invalid)?)
            }
            Kind::Zocs => {
                let ts = self.transitions.iter().map(|t| {
                    let guard = match t.guard {
                        GuardName::Pos => ZGuard::Positive,
                        GuardName::Zero => ZGuard::Zero,
                        GuardName::Neg => ZGuard::Negative,
                    };
                    ZTransition::new(map[t.src.as_str()], t.eff, map[t.dst.as_str()], guard)
                });
                System::Zocs(ZOcs::new(states, ts).map_err(invalid)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub state: String,
    pub counter: i64,
    /// Position of the fired transition in the system's transition list.
    pub transition_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub state: String,
    pub counter: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSummary {
    pub length: usize,
    /// Intermediate configurations (endpoints excluded) at counter zero.
    pub zeros: usize,
    pub max_counter: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub steps: Vec<StepRecord>,
    #[serde(rename = "final")]
    pub final_config: ConfigRecord,
    pub summary: PathSummary,
}

fn counter_i64(c: u64) -> i64 {
    i64::try_from(c).expect("counter values stay below 2^63")
}

impl PathDocument {
    fn build(names: &[String], configs: impl Iterator<Item = (usize, i64)>, indices: Vec<usize>) -> Self {
        let configs: Vec<(usize, i64)> = configs.collect();
        let (last, body) = configs.split_last().expect("a path has a configuration");
        let steps = body
            .iter()
            .zip(indices)
            .map(|(&(q, c), i)| StepRecord { state: names[q].clone(), counter: c, transition_index: i })
            .collect();
        let final_config = ConfigRecord { state: names[last.0].clone(), counter: last.1 };
        let mut doc =
            PathDocument { steps, final_config, summary: PathSummary { length: 0, zeros: 0, max_counter: 0 } };
        doc.summary = doc.recompute_summary();
        doc
    }

    pub fn from_path(ocs: &Ocs, path: &Path) -> Self {
        let indices = path
            .steps()
            .iter()
            .map(|t| ocs.transition_index(t).expect("path transitions belong to the system"))
            .collect();
        Self::build(ocs.names(), path.configs().iter().map(|c| (c.state, counter_i64(c.counter))), indices)
    }

    pub fn from_zpath(z: &ZOcs, path: &ZPath) -> Self {
        let indices = path
            .steps()
            .iter()
            .map(|t| z.transitions().iter().position(|u| u == t).expect("path transitions belong to the system"))
            .collect();
        Self::build(z.names(), path.configs().iter().map(|c| (c.state, c.counter)), indices)
    }

    pub fn recompute_summary(&self) -> PathSummary {
        let counters: Vec<i64> =
            self.steps.iter().map(|s| s.counter).chain(std::iter::once(self.final_config.counter)).collect();
        let zeros =
            if counters.len() <= 2 { 0 } else { counters[1..counters.len() - 1].iter().filter(|&&c| c == 0).count() };
        PathSummary { length: self.steps.len(), zeros, max_counter: counters.iter().copied().max().unwrap_or(0) }
    }

    /// Parses a document and checks that its summary is consistent.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: PathDocument = serde_json::from_str(text)?;
        doc.check_summary()?;
        Ok(doc)
    }

    fn check_summary(&self) -> Result<(), DocumentError> {
        let expected = self.recompute_summary();
        if self.summary != expected {
            return Err(schema("summary", format!("does not match the steps, expected {expected:?}")));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    fn configs(&self, names: &[String]) -> Result<Vec<(usize, i64)>, DocumentError> {
        let lookup = |field: String, s: &str| {
            names.iter().position(|n| n == s).ok_or_else(|| schema(field, format!("unknown state {s:?}")))
        };
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        for (i, s) in self.steps.iter().enumerate() {
            out.push((lookup(format!("steps[{i}].state"), &s.state)?, s.counter));
        }
        out.push((lookup("final.state".into(), &self.final_config.state)?, self.final_config.counter));
        Ok(out)
    }

    /// Rebuilds the path inside `ocs` and checks every step.
    pub fn to_path(&self, ocs: &Ocs) -> Result<Path, DocumentError> {
        self.check_summary()?;
        let raw = self.configs(ocs.names())?;
        let mut configs = Vec::with_capacity(raw.len());
        for (i, &(q, c)) in raw.iter().enumerate() {
            let c = u64::try_from(c).map_err(|_| schema(format!("steps[{i}].counter"), "negative counter"))?;
            configs.push(Config::new(q, c));
        }
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            let t = ocs.transitions().get(s.transition_index).ok_or_else(|| {
                schema(format!("steps[{i}].transition_index"), format!("no transition {}", s.transition_index))
            })?;
            steps.push(*t);
        }
        let path = Path::from_parts(configs, steps).map_err(|e| schema("steps", e.to_string()))?;
        validate_path(ocs, &path).map_err(|v| schema(format!("steps[{}]", v.step), format!("{:?}", v.rule)))?;
        Ok(path)
    }

    /// Rebuilds a path over the integers and checks every step.
    pub fn to_zpath(&self, z: &ZOcs) -> Result<ZPath, DocumentError> {
        self.check_summary()?;
        let raw = self.configs(z.names())?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            let t = z.transitions().get(s.transition_index).ok_or_else(|| {
                schema(format!("steps[{i}].transition_index"), format!("no transition {}", s.transition_index))
            })?;
            steps.push(*t);
        }
        let start = ZConfig::new(raw[0].0, raw[0].1);
        let path = ZPath::fasten(start, &steps).ok_or_else(|| schema("steps", "a step is not fireable"))?;
        for (i, (c, &(q, k))) in path.configs().iter().zip(&raw).enumerate() {
            if c.state != q || c.counter != k {
                return Err(schema(format!("steps[{i}]"), "configuration does not follow from the previous step"));
            }
        }
        Ok(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartLengths {
    pub pref: usize,
    pub up: usize,
    pub cap: usize,
    pub down: usize,
    pub suff: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalRecord {
    pub up_component: String,
    pub down_component: String,
    pub up_effect: u64,
    pub down_effect: u64,
    pub up_copies: u64,
    pub down_copies: u64,
    pub parts: PartLengths,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcRecord {
    /// Index of the arc's first step in the whole path.
    pub start: usize,
    pub length: usize,
    pub max_counter: u64,
    /// `None` for a low arc.
    pub normal: Option<NormalRecord>,
}

/// A normalized path together with a per-arc decomposition report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizeDocument {
    pub path: PathDocument,
    pub arcs: Vec<ArcRecord>,
}

impl NormalizeDocument {
    pub fn new(ocs: &Ocs, normalized: &NormalizedPath) -> Self {
        let mut start = 0;
        let arcs = normalized
            .arcs
            .iter()
            .map(|arc| {
                let normal = arc.decomposition.as_ref().map(|d| NormalRecord {
                    up_component: d.s.to_string(),
                    down_component: d.t.to_string(),
                    up_effect: d.eff_up,
                    down_effect: d.eff_down,
                    up_copies: d.a,
                    down_copies: d.b,
                    parts: PartLengths {
                        pref: d.pref.len(),
                        up: d.up.len(),
                        cap: d.cap.len(),
                        down: d.down.len(),
                        suff: d.suff.len(),
                    },
                });
                let rec = ArcRecord { start, length: arc.path.len(), max_counter: arc.path.max_counter(), normal };
                start += arc.path.len();
                rec
            })
            .collect();
        NormalizeDocument { path: PathDocument::from_path(ocs, &normalized.path), arcs }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: NormalizeDocument = serde_json::from_str(text)?;
        doc.path.check_summary()?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }
}
