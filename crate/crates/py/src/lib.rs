//! Python bindings: model parameters, exact states, operator expressions and
//! the decomposition tables.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use parabose_core::cli::expr;
use parabose_core::cli::state_file::StateFile;
use parabose_core::decompose::{self as dec, Decomposer, OspSignature};
use parabose_core::verify::{self as checks, Suite, VerifyConfig};
use parabose_core::{Error, Half, DEFAULT_CAPACITY};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "ModelParams", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct ModelParams(parabose_core::ModelParams);

#[pymethods]
impl ModelParams {
    #[new]
    fn new(n: usize, p: usize) -> PyResult<Self> {
        parabose_core::ModelParams::new(n, p).map(ModelParams).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.0.q()
    }

    /// Number of kets of orbital degree `d`, spin included.
    fn shell_size(&self, d: usize) -> u128 {
        self.0.shell_size(d)
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(n={}, p={})", self.0.n(), self.0.p())
    }
}

/// An exact state; coefficients live in Q(i, √2).
#[pyclass(name = "State", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct State(parabose_core::State);

#[pymethods]
impl State {
    /// Vacuum tensored with the spin state given as ±1 signs (all up by default).
    #[staticmethod]
    #[pyo3(signature = (params, spin=None))]
    fn vacuum(params: &ModelParams, spin: Option<Vec<i8>>) -> PyResult<Self> {
        let spin = match spin {
            Some(s) => parabose_core::SpinState::from_signs(&s).map_err(py_err)?,
            None => parabose_core::SpinState::all_up(params.0.q()),
        };
        if spin.len() != params.0.q() {
            return Err(PyValueError::new_err(format!("spin needs {} signs", params.0.q())));
        }
        Ok(State(parabose_core::State::vacuum(params.0, spin)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        StateFile::parse(text).and_then(|f| f.to_state()).map(State).map_err(py_err)
    }

    fn to_json(&self) -> String {
        StateFile::from_state(&self.0).to_json()
    }

    #[getter]
    fn params(&self) -> ModelParams {
        ModelParams(*self.0.params())
    }

    /// Apply an operator expression such as `"bd(1) b(2)"` (rightmost acts first).
    fn apply(&self, expression: &str) -> PyResult<Self> {
        let op = expr::parse(expression).map_err(py_err)?;
        op.apply(&self.0).map(State).map_err(py_err)
    }

    /// `⟨self, self⟩` as an exact rational string.
    fn norm_sq(&self) -> String {
        self.0.norm_sq().to_string()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Ratio `c` with `self = c · other`, as a string, if the states are proportional.
    fn proportionality(&self, other: &State) -> Option<String> {
        self.0.proportionality(&other.0).map(|c| c.to_string())
    }

    fn __add__(&self, other: &State) -> PyResult<Self> {
        self.0.check_params(&other.0).map_err(py_err)?;
        Ok(State(self.0.plus(&other.0)))
    }

    fn __sub__(&self, other: &State) -> PyResult<Self> {
        self.0.check_params(&other.0).map_err(py_err)?;
        Ok(State(self.0.minus(&other.0)))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("State({})", self.0)
    }
}

fn parse_sig(sig: &str) -> PyResult<OspSignature> {
    sig.parse().map_err(py_err)
}

/// Explicit joint lowest/highest-weight vector for an osp signature `"d;s1,..."`.
#[pyfunction]
fn lwhw_vector(params: &ModelParams, sig: &str) -> PyResult<State> {
    dec::build_lwhw_vector(&params.0, &parse_sig(sig)?).map(State).map_err(py_err)
}

/// Gauge signature `σ` paired with an osp signature, or `None`.
#[pyfunction]
fn signature_bijection(params: &ModelParams, sig: &str) -> PyResult<Option<Vec<u64>>> {
    Ok(dec::signature_bijection(&parse_sig(sig)?, &params.0).map(|g| g.sigma))
}

/// Weyl dimension of the so(p) irrep with highest weight `mu` (strings like `"3/2"`).
#[pyfunction]
#[pyo3(signature = (p, mu, pin=false))]
fn weyl_dim(p: usize, mu: Vec<String>, pin: bool) -> PyResult<u128> {
    let mu = mu.iter().map(|m| m.parse::<Half>()).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
    dec::weyl_dim(p, &mu, pin).map_err(py_err)
}

type Row = (usize, String, String, Vec<u64>, Vec<String>, u128, State);

/// Rows `(degree, energy, signature, sigma, mu, gauge_dim, vector)`.
#[pyfunction]
fn decompose(params: &ModelParams, max_degree: usize) -> PyResult<Vec<Row>> {
    let mut d = Decomposer::new(params.0, DEFAULT_CAPACITY).map_err(py_err)?;
    let report = d.joint_lw_hw_table(max_degree).map_err(py_err)?;
    Ok(report
        .rows
        .into_iter()
        .map(|r| {
            (
                r.degree,
                r.energy.to_string(),
                r.osp.to_string(),
                r.gauge.sigma,
                r.mu.iter().map(Half::to_string).collect(),
                r.gauge_dim,
                State(r.vector),
            )
        })
        .collect())
}

/// Rows `(degree, signature, counted, claimed)`.
#[pyfunction]
fn multiplicity_check(params: &ModelParams, max_degree: usize) -> PyResult<Vec<(usize, String, u128, u128)>> {
    let mut d = Decomposer::new(params.0, DEFAULT_CAPACITY).map_err(py_err)?;
    Ok(d.multiplicity_check(max_degree)
        .map_err(py_err)?
        .into_iter()
        .map(|r| (r.degree, r.osp.to_string(), r.counted, r.claimed))
        .collect())
}

/// Run a property suite; returns `(suite, passed, failed)` per suite.
#[pyfunction]
#[pyo3(signature = (params, suite="all", max_degree=2, seed=0))]
fn verify(params: &ModelParams, suite: &str, max_degree: usize, seed: u64) -> PyResult<Vec<(String, usize, usize)>> {
    let suite: Suite = suite.parse().map_err(py_err)?;
    let cfg = VerifyConfig { seed, ..VerifyConfig::new(params.0, max_degree) };
    Ok(checks::run(suite, &cfg)
        .map_err(py_err)?
        .into_iter()
        .map(|r| (r.suite.name().to_string(), r.passed, r.failures.len()))
        .collect())
}

#[pymodule]
fn parabose_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ModelParams>()?;
    m.add_class::<State>()?;
    m.add_function(wrap_pyfunction!(lwhw_vector, m)?)?;
    m.add_function(wrap_pyfunction!(signature_bijection, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_dim, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
