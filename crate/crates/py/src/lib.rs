//! Python bindings: formulas, game models, model checking and the decider.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mcl_core::decide::{decide_sat as core_sat, Decider};
use mcl_core::fixtures;
use mcl_core::formula::{parse as core_parse, AgentUniverse, Formula as CoreFormula};
use mcl_core::model::{classify as core_classify, read_model_document, GameModel};
use mcl_core::normalform::normalize as core_normalize;
use mcl_core::semantics::{eval as core_eval, PointedModel};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed formula together with the agent order it was parsed under.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Formula {
    inner: CoreFormula,
    universe: AgentUniverse,
}

#[pymethods]
impl Formula {
    #[getter]
    fn agents(&self) -> Vec<String> {
        self.universe.names().to_vec()
    }

    fn depth(&self) -> usize {
        self.inner.modal_depth()
    }

    /// The core AST: only `true`, atoms, `~`, `&` and `<C>`.
    fn core(&self) -> String {
        self.inner.print_core(&self.universe)
    }

    fn __str__(&self) -> String {
        self.inner.print(&self.universe)
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.inner.print(&self.universe))
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.inner == other.inner && self.universe == other.universe
    }
}

/// A general concurrent game model, optionally with a designated state.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Model {
    inner: GameModel,
    designated: Option<usize>,
}

impl Model {
    fn state(&self, name: Option<&str>) -> PyResult<usize> {
        match name {
            Some(n) => self.inner.state_id(n).map_err(|e| PyKeyError::new_err(e.to_string())),
            None => Ok(self.designated.unwrap_or(0)),
        }
    }

    fn from_pointed(pm: &PointedModel) -> Model {
        Model {
            inner: pm.model.clone(),
            designated: Some(pm.state),
        }
    }
}

#[pymethods]
impl Model {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Model> {
        let (inner, designated) = read_model_document(text).map_err(value_error)?;
        inner.validate().map_err(value_error)?;
        Ok(Model { inner, designated })
    }

    /// A bundled example model by name.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Model> {
        fixtures::by_name(name)
            .map(|inner| Model { inner, designated: None })
            .ok_or_else(|| PyKeyError::new_err(format!("no fixture named {name}")))
    }

    fn to_json(&self) -> String {
        match self.designated {
            Some(s) => self.inner.to_json_pointed(s),
            None => self.inner.to_json(),
        }
    }

    #[getter]
    fn agents(&self) -> Vec<String> {
        self.inner.universe().names().to_vec()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states().to_vec()
    }

    #[getter]
    fn actions(&self) -> Vec<String> {
        self.inner.actions().to_vec()
    }

    #[getter]
    fn designated(&self) -> Option<String> {
        self.designated.map(|s| self.inner.state_name(s).to_string())
    }

    /// Seriality, independence and determinism with violation witnesses.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = core_classify(&self.inner);
        let d = PyDict::new(py);
        d.set_item("summary", c.to_string())?;
        d.set_item("is_gcgm", c.is_gcgm)?;
        d.set_item("serial", c.serial)?;
        d.set_item("independent", c.independent)?;
        d.set_item("deterministic", c.deterministic)?;
        d.set_item("is_cgm", c.is_cgm)?;
        d.set_item(
            "witnesses",
            c.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        )?;
        Ok(d)
    }

    /// Truth of `formula` at `state` (default: designated, else first).
    /// `formula` is a Formula or formula text parsed under the model's agents.
    #[pyo3(signature = (formula, state=None))]
    fn eval(&self, formula: &Bound<'_, PyAny>, state: Option<&str>) -> PyResult<bool> {
        let u = self.inner.universe();
        // Coalitions are bitmasks over an agent order, so a Formula is
        // reprinted and reparsed under the model's order.
        let text = match formula.extract::<String>() {
            Ok(text) => text,
            Err(_) => {
                let f = formula.cast::<Formula>()?.get();
                f.inner.print(&f.universe)
            }
        };
        let f = core_parse(&text, u).map_err(value_error)?;
        let s = self.state(state)?;
        core_eval(&self.inner, s, &f).map_err(value_error)
    }
}

/// Parses formula text. `agents` fixes the agent order; by default it is the
/// order of first mention inside coalition braces.
#[pyfunction]
#[pyo3(signature = (text, agents=None))]
fn parse(text: &str, agents: Option<Vec<String>>) -> PyResult<Formula> {
    let universe = match agents {
        Some(names) => AgentUniverse::new(names),
        None => AgentUniverse::infer_from_text(text),
    }
    .map_err(value_error)?;
    let inner = core_parse(text, &universe).map_err(value_error)?;
    Ok(Formula { inner, universe })
}

/// Standard clauses of a formula of modal depth at least 1, as formula text.
#[pyfunction]
fn normalize(formula: &Formula) -> PyResult<Vec<String>> {
    let clauses = core_normalize(&formula.inner, &formula.universe).map_err(value_error)?;
    Ok(clauses.iter().map(|c| c.display(&formula.universe).to_string()).collect())
}

/// Validity verdict: `{"valid", "trace", "countermodel"}`; the countermodel
/// is a Model with its designated state set, or None.
#[pyfunction]
fn decide_valid<'py>(py: Python<'py>, formula: &Formula) -> PyResult<Bound<'py, PyDict>> {
    let v = Decider::new(&formula.universe).valid(&formula.inner).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("valid", v.valid)?;
    d.set_item("trace", v.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>())?;
    d.set_item("countermodel", v.countermodel.as_ref().map(Model::from_pointed))?;
    Ok(d)
}

/// Satisfiability verdict: `{"satisfiable", "trace", "witness"}`.
#[pyfunction]
fn decide_sat<'py>(py: Python<'py>, formula: &Formula) -> PyResult<Bound<'py, PyDict>> {
    let v = core_sat(&formula.inner, &formula.universe).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("satisfiable", v.satisfiable)?;
    d.set_item("trace", v.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>())?;
    d.set_item("witness", v.witness.as_ref().map(Model::from_pointed))?;
    Ok(d)
}

#[pymodule]
fn mcl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(decide_valid, m)?)?;
    m.add_function(wrap_pyfunction!(decide_sat, m)?)?;
    m.add("FIXTURES", fixtures::NAMES.to_vec())?;
    Ok(())
}
