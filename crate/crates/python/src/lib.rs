//! Python bindings. Systems are built from state names and
//! `(src, eff, dst, guard)` tuples, or loaded from their JSON documents;
//! configurations are `(state, counter)` tuples.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ocspath_core::generators;
use ocspath_core::io::{
    DocumentError, GuardName, Kind, NormalizeDocument, PathDocument, System, SystemDocument, TransitionRecord,
};
use ocspath_core::normalize::normalize_path;
use ocspath_core::reach::{self, min_zero_path, shortest_path};
use ocspath_core::{Config, Error, ZConfig};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceExhausted { .. } => PyMemoryError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn doc_err(e: DocumentError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn guard_name(g: &str) -> PyResult<GuardName> {
    match g {
        "pos" => Ok(GuardName::Pos),
        "zero" => Ok(GuardName::Zero),
        "neg" => Ok(GuardName::Neg),
        _ => Err(PyValueError::new_err(format!("unknown guard {g:?}, expected pos, zero or neg"))),
    }
}

fn records(transitions: Vec<(String, i64, String, String)>) -> PyResult<Vec<TransitionRecord>> {
    transitions
        .into_iter()
        .map(|(src, eff, dst, g)| Ok(TransitionRecord { src, eff, dst, guard: guard_name(&g)?, label: None }))
        .collect()
}

fn state(names: &[String], name: &str) -> PyResult<usize> {
    names.iter().position(|s| s == name).ok_or_else(|| PyValueError::new_err(format!("unknown state {name:?}")))
}

/// A path or integer path, kept in its document form.
#[pyclass(frozen, module = "ocspath")]
pub struct Path {
    doc: PathDocument,
}

#[pymethods]
impl Path {
    #[getter]
    fn length(&self) -> usize {
        self.doc.summary.length
    }

    /// Intermediate configurations at counter zero.
    #[getter]
    fn zeros(&self) -> usize {
        self.doc.summary.zeros
    }

    #[getter]
    fn max_counter(&self) -> i64 {
        self.doc.summary.max_counter
    }

    /// Every configuration from source to target.
    #[getter]
    fn configs(&self) -> Vec<(String, i64)> {
        self.doc
            .steps
            .iter()
            .map(|s| (s.state.clone(), s.counter))
            .chain(std::iter::once((self.doc.final_config.state.clone(), self.doc.final_config.counter)))
            .collect()
    }

    /// Positions of the fired transitions in the system's transition list.
    #[getter]
    fn transition_indices(&self) -> Vec<usize> {
        self.doc.steps.iter().map(|s| s.transition_index).collect()
    }

    fn to_json(&self) -> String {
        self.doc.to_text()
    }

    fn __len__(&self) -> usize {
        self.doc.summary.length
    }

    fn __repr__(&self) -> String {
        let s = &self.doc.summary;
        format!("Path(length={}, zeros={}, max_counter={})", s.length, s.zeros, s.max_counter)
    }
}

/// A one-counter system over the naturals.
#[pyclass(frozen, module = "ocspath")]
pub struct Ocs {
    inner: ocspath_core::Ocs,
}

impl Ocs {
    fn config(&self, (name, counter): (String, u64)) -> PyResult<Config> {
        Ok(Config::new(state(self.inner.names(), &name)?, counter))
    }
}

#[pymethods]
impl Ocs {
    /// `transitions` are `(src, eff, dst, guard)` with guard `"pos"` or `"zero"`.
    #[new]
    fn new(states: Vec<String>, transitions: Vec<(String, i64, String, String)>) -> PyResult<Self> {
        let doc = SystemDocument {
            kind: Kind::Ocs,
            states,
            alphabet: None,
            initial: None,
            finals: None,
            transitions: records(transitions)?,
        };
        match doc.to_system().map_err(doc_err)? {
            System::Ocs(inner) => Ok(Ocs { inner }),
            _ => unreachable!("kind is ocs"),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match SystemDocument::parse(text).and_then(|d| d.to_system()).map_err(doc_err)? {
            System::Ocs(inner) => Ok(Ocs { inner }),
            System::Oca(a) => Ok(Ocs { inner: a.ocs().clone() }),
            System::Zocs(_) => Err(PyValueError::new_err("document describes an integer system, use ZOcs")),
        }
    }

    fn to_json(&self) -> String {
        SystemDocument::from_ocs(&self.inner).to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn transitions(&self) -> Vec<(String, i64, String, String)> {
        self.inner
            .transitions()
            .iter()
            .map(|t| {
                let g = if t.guard == ocspath_core::Guard::Zero { "zero" } else { "pos" };
                (self.inner.name(t.src).to_owned(), t.eff, self.inner.name(t.dst).to_owned(), g.to_owned())
            })
            .collect()
    }

    /// Shortest path between two configurations, or `None`.
    fn shortest_path(&self, py: Python<'_>, src: (String, u64), dst: (String, u64)) -> PyResult<Option<Path>> {
        let (a, b) = (self.config(src)?, self.config(dst)?);
        let found = py.detach(|| shortest_path(&self.inner, a, b)).map_err(py_err)?;
        Ok(found.map(|p| Path { doc: PathDocument::from_path(&self.inner, &p) }))
    }

    /// Shortest among the paths with fewest intermediate zero configurations.
    fn min_zero_path(&self, py: Python<'_>, src: (String, u64), dst: (String, u64)) -> PyResult<Option<Path>> {
        let (a, b) = (self.config(src)?, self.config(dst)?);
        let found = py.detach(|| min_zero_path(&self.inner, a, b)).map_err(py_err)?;
        Ok(found.map(|p| Path { doc: PathDocument::from_path(&self.inner, &p) }))
    }

    /// Normalized path between two zero configurations with its per-arc
    /// report, as a JSON document; `None` if unreachable.
    fn normalize(&self, py: Python<'_>, src: (String, u64), dst: (String, u64)) -> PyResult<Option<String>> {
        let (a, b) = (self.config(src)?, self.config(dst)?);
        match py.detach(|| normalize_path(&self.inner, a, b)) {
            Ok(np) => Ok(Some(NormalizeDocument::new(&self.inner, &np).to_text())),
            Err(Error::Unreachable) => Ok(None),
            Err(e) => Err(py_err(e)),
        }
    }

    /// Checks a path document against this system and returns its length.
    fn validate(&self, path_json: &str) -> PyResult<usize> {
        let doc = PathDocument::parse(path_json).map_err(doc_err)?;
        Ok(doc.to_path(&self.inner).map_err(doc_err)?.len())
    }

    fn __repr__(&self) -> String {
        format!("Ocs(n={}, transitions={})", self.inner.n(), self.inner.transitions().len())
    }
}

/// A one-counter automaton.
#[pyclass(frozen, module = "ocspath")]
pub struct Oca {
    inner: ocspath_core::Oca,
}

#[pymethods]
impl Oca {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match SystemDocument::parse(text).and_then(|d| d.to_system()).map_err(doc_err)? {
            System::Oca(inner) => Ok(Oca { inner }),
            _ => Err(PyValueError::new_err("document does not describe an automaton")),
        }
    }

    fn to_json(&self) -> String {
        SystemDocument::from_oca(&self.inner).to_text()
    }

    /// A shortest accepted word as a list of letters, or `None` if the
    /// language is empty.
    fn shortest_word(&self, py: Python<'_>) -> PyResult<Option<Vec<String>>> {
        py.detach(|| ocspath_core::shortest_word(&self.inner)).map_err(py_err)
    }

    fn system(&self) -> Ocs {
        Ocs { inner: self.inner.ocs().clone() }
    }
}

/// A one-counter system whose counter ranges over the integers.
#[pyclass(frozen, module = "ocspath")]
pub struct ZOcs {
    inner: ocspath_core::ZOcs,
}

#[pymethods]
impl ZOcs {
    /// `transitions` are `(src, eff, dst, guard)` with guard `"pos"`,
    /// `"neg"` or `"zero"`.
    #[new]
    fn new(states: Vec<String>, transitions: Vec<(String, i64, String, String)>) -> PyResult<Self> {
        let doc = SystemDocument {
            kind: Kind::Zocs,
            states,
            alphabet: None,
            initial: None,
            finals: None,
            transitions: records(transitions)?,
        };
        match doc.to_system().map_err(doc_err)? {
            System::Zocs(inner) => Ok(ZOcs { inner }),
            _ => unreachable!("kind is zocs"),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match SystemDocument::parse(text).and_then(|d| d.to_system()).map_err(doc_err)? {
            System::Zocs(inner) => Ok(ZOcs { inner }),
            System::Ocs(o) => Ok(ZOcs { inner: ocspath_core::ZOcs::from_ocs(&o) }),
            System::Oca(a) => Ok(ZOcs { inner: ocspath_core::ZOcs::from_ocs(a.ocs()) }),
        }
    }

    fn to_json(&self) -> String {
        SystemDocument::from_zocs(&self.inner).to_text()
    }

    fn shortest_path(&self, py: Python<'_>, src: (String, i64), dst: (String, i64)) -> PyResult<Option<Path>> {
        let names = self.inner.names();
        let a = ZConfig::new(state(names, &src.0)?, src.1);
        let b = ZConfig::new(state(names, &dst.0)?, dst.1);
        let found = py.detach(|| ocspath_core::z_shortest_path(&self.inner, a, b)).map_err(py_err)?;
        Ok(found.map(|p| Path { doc: PathDocument::from_zpath(&self.inner, &p) }))
    }
}

type Query = (Ocs, (String, u64), (String, u64));

fn instance(i: generators::Instance) -> Query {
    let src = (i.ocs.name(i.source.state).to_owned(), i.source.counter);
    let dst = (i.ocs.name(i.target.state).to_owned(), i.target.counter);
    (Ocs { inner: i.ocs }, src, dst)
}

/// The deterministic family whose only path has length `n^2`; returns
/// `(system, source, target)`.
#[pyfunction]
fn example1(n: usize) -> PyResult<Query> {
    generators::example1(n).map(instance).map_err(py_err)
}

/// The family whose shortest path has length `2km + 2`.
#[pyfunction]
fn example2(k: usize, m: usize) -> PyResult<Query> {
    generators::example2(k, m).map(instance).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, c_alpha = 0, c_beta = 0))]
fn example3(n: usize, c_alpha: u64, c_beta: u64) -> PyResult<Query> {
    generators::example3(n, c_alpha, c_beta).map(instance).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, pos_density = 0.3, zero_density = 0.1, seed = 0))]
fn random_ocs(n: usize, pos_density: f64, zero_density: f64, seed: u64) -> PyResult<Ocs> {
    let inner = generators::random_ocs(n, pos_density, zero_density, seed).map_err(py_err)?;
    Ok(Ocs { inner })
}

#[pyfunction]
#[pyo3(signature = (n, pos_density = 0.3, zero_density = 0.1, epsilon = 0.2, seed = 0))]
fn random_oca(n: usize, pos_density: f64, zero_density: f64, epsilon: f64, seed: u64) -> PyResult<Oca> {
    let inner = generators::random_oca(n, pos_density, zero_density, epsilon, seed).map_err(py_err)?;
    Ok(Oca { inner })
}

#[pyfunction]
#[pyo3(signature = (n, density = 0.2, seed = 0))]
fn random_zocs(n: usize, density: f64, seed: u64) -> PyResult<ZOcs> {
    Ok(ZOcs { inner: generators::random_zocs(n, density, seed).map_err(py_err)? })
}

/// `14 n^2`, the bound on shortest paths between zero configurations.
#[pyfunction]
fn zero_bound(n: usize) -> PyResult<u64> {
    reach::zero_bound(n).map_err(py_err)
}

/// `14 n^2 + n * max(c_alpha, c_beta)`.
#[pyfunction]
fn length_bound(n: usize, c_alpha: u64, c_beta: u64) -> PyResult<u64> {
    reach::length_bound(n, c_alpha, c_beta).map_err(py_err)
}

/// Size limit, in bits, of the visited bitmaps used by the searches.
#[pyfunction]
fn set_memory_budget(bits: u64) {
    reach::set_memory_budget(bits);
}

#[pymodule]
fn ocspath(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ocs>()?;
    m.add_class::<Oca>()?;
    m.add_class::<ZOcs>()?;
    m.add_class::<Path>()?;
    m.add_function(wrap_pyfunction!(example1, m)?)?;
    m.add_function(wrap_pyfunction!(example2, m)?)?;
    m.add_function(wrap_pyfunction!(example3, m)?)?;
    m.add_function(wrap_pyfunction!(random_ocs, m)?)?;
    m.add_function(wrap_pyfunction!(random_oca, m)?)?;
    m.add_function(wrap_pyfunction!(random_zocs, m)?)?;
    m.add_function(wrap_pyfunction!(zero_bound, m)?)?;
    m.add_function(wrap_pyfunction!(length_bound, m)?)?;
    m.add_function(wrap_pyfunction!(set_memory_budget, m)?)?;
    Ok(())
}
