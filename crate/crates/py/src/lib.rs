//! Python bindings.
//!
//! Scenarios, models and verdicts cross the boundary as JSON strings in the
//! same formats the `ctx` command line reads and writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ctx_core::bundle::{elements, to_event};
use ctx_core::event::{global_sections, tensor_event, EventScenario};
use ctx_core::io::{
    bundle_to_json, decision_from_json, decision_to_json, event_to_json, model_from_json,
    parse_json, scenario_from_json, sdist_from_json, simplicial_to_json, Scenario,
};
use ctx_core::laws::{run_suite, Suite};
use ctx_core::solve::{check_contextuality, check_simplicial_contextuality, DEFAULT_SECTION_CAP};
use ctx_core::sset::sections;
use ctx_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(m) => PyRuntimeError::new_err(format!("resource limit exceeded: {m}")),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn scenario(text: &str) -> PyResult<Scenario> {
    scenario_from_json(&parse_json(text).map_err(py_err)?).map_err(py_err)
}

fn event_of(s: Scenario) -> PyResult<EventScenario> {
    match s {
        Scenario::Event(f) => Ok(f),
        Scenario::Bundle(b) => to_event(&b).map_err(py_err),
        Scenario::Simplicial(_) => Err(PyValueError::new_err(
            "expected an event or bundle scenario",
        )),
    }
}

/// Parses a scenario file and returns its kind.
#[pyfunction]
fn scenario_kind(scenario_json: &str) -> PyResult<&'static str> {
    Ok(scenario(scenario_json)?.kind())
}

/// The tensor product of two scenarios of the same kind.
#[pyfunction]
fn tensor(left: &str, right: &str) -> PyResult<String> {
    let out = match (scenario(left)?, scenario(right)?) {
        (Scenario::Simplicial(f), Scenario::Simplicial(g)) => {
            simplicial_to_json(&f.tensor(&g).map_err(py_err)?)
        }
        (f, g) => event_to_json(&tensor_event(&event_of(f)?, &event_of(g)?).map_err(py_err)?),
    };
    Ok(out.to_string())
}

/// Converts to `"event"` or `"bundle"` form.
#[pyfunction]
fn convert(scenario_json: &str, to: &str) -> PyResult<String> {
    let s = scenario(scenario_json)?;
    let out = match to {
        "event" => event_to_json(&event_of(s)?),
        "bundle" => bundle_to_json(&elements(&event_of(s)?)),
        other => return Err(PyValueError::new_err(format!("unknown target {other:?}"))),
    };
    Ok(out.to_string())
}

/// The number of global sections.
#[pyfunction]
#[pyo3(signature = (scenario_json, cap = DEFAULT_SECTION_CAP))]
fn count_sections(scenario_json: &str, cap: usize) -> PyResult<usize> {
    match scenario(scenario_json)? {
        Scenario::Simplicial(f) => Ok(sections(&f, cap).map_err(py_err)?.len()),
        other => Ok(global_sections(&event_of(other)?, cap)
            .map_err(py_err)?
            .len()),
    }
}

/// Decides contextuality and returns the verdict file as JSON.
#[pyfunction]
#[pyo3(signature = (scenario_json, model_json, cap = DEFAULT_SECTION_CAP))]
fn check(scenario_json: &str, model_json: &str, cap: usize) -> PyResult<String> {
    let model = parse_json(model_json).map_err(py_err)?;
    let decision = match scenario(scenario_json)? {
        Scenario::Simplicial(f) => {
            let p = sdist_from_json(&f, &model).map_err(py_err)?;
            check_simplicial_contextuality(&f, &p, cap)
                .map_err(py_err)?
                .0
        }
        other => {
            let f = event_of(other)?;
            let p = model_from_json(&f, &model).map_err(py_err)?;
            check_contextuality(&f, &p, cap).map_err(py_err)?
        }
    };
    Ok(decision_to_json(&decision).to_string())
}

/// Re-checks the witness or certificate in a verdict file.
#[pyfunction]
fn verify_certificate(verdict_json: &str) -> PyResult<bool> {
    let d = decision_from_json(&parse_json(verdict_json).map_err(py_err)?).map_err(py_err)?;
    Ok(d.verify())
}

/// Runs a law suite and returns its report as JSON.
#[pyfunction]
#[pyo3(signature = (suite, trials = 100, seed = 0))]
fn run_laws(suite: &str, trials: usize, seed: u64) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(py_err)?;
    Ok(run_suite(suite, trials, seed).to_json().to_string())
}

/// The library version.
#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[pymodule]
fn ctx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(scenario_kind, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(convert, m)?)?;
    m.add_function(wrap_pyfunction!(count_sections, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(run_laws, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}
