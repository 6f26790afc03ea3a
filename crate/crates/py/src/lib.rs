//! Python module `urel`: states, observables, relation bounds, qubit closed
//! forms, shot simulation, sweeps and verification campaigns.
//!
//! Structured results (sweep rows, verification summaries) are handed over as
//! plain dicts and lists decoded from the core crate's JSON form.

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use urel_core::bounds::{self, EvaluateOptions, Outcome};
use urel_core::harness::sweep::{self, SweepSpec};
use urel_core::harness::verify::{self, VerifyConfig};
use urel_core::qubit::{self, StokesVector};
use urel_core::shots::{self, MeasurementRecord, ShotPlan, DEFAULT_RESAMPLES};
use urel_core::{Axis, BlochAngles, ObservableSet, QuantumState, RelationId};

fn err(e: urel_core::Error) -> PyErr {
    match e {
        urel_core::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn axis(s: &str) -> PyResult<Axis> {
    s.parse().map_err(err)
}

fn relations(labels: Option<Vec<String>>) -> PyResult<Vec<RelationId>> {
    match labels {
        None => Ok(RelationId::SUM_FORM.to_vec()),
        Some(l) => l.iter().map(|s| s.parse().map_err(err)).collect(),
    }
}

fn to_py_json<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Hermitian matrix observable.
#[pyclass(name = "Observable", module = "urel", frozen, from_py_object)]
#[derive(Clone)]
struct PyObservable {
    inner: urel_core::Observable,
}

#[pymethods]
impl PyObservable {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(PyObservable {
            inner: urel_core::Observable::from_rows(&rows).map_err(err)?,
        })
    }

    /// Pauli matrix for axis "x", "y" or "z".
    #[staticmethod]
    fn pauli(axis_name: &str) -> PyResult<Self> {
        Ok(PyObservable {
            inner: qubit::pauli(axis(axis_name)?),
        })
    }

    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        Ok(PyObservable {
            inner: urel_core::quantum::random_observable(dim, seed).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        self.inner.matrix().rows()
    }

    fn __add__(&self, other: &PyObservable) -> PyResult<Self> {
        Ok(PyObservable {
            inner: self.inner.plus(&other.inner).map_err(err)?,
        })
    }

    fn __sub__(&self, other: &PyObservable) -> PyResult<Self> {
        Ok(PyObservable {
            inner: self.inner.minus(&other.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Observable(dim={})", self.inner.dim())
    }
}

#[pyclass(name = "PureState", module = "urel", frozen, from_py_object)]
#[derive(Clone)]
struct PyPureState {
    inner: urel_core::PureState,
}

#[pymethods]
impl PyPureState {
    #[new]
    #[pyo3(signature = (amplitudes, normalize = false))]
    fn new(amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let inner = if normalize {
            urel_core::PureState::normalized(amplitudes)
        } else {
            urel_core::PureState::new(amplitudes)
        };
        Ok(PyPureState {
            inner: inner.map_err(err)?,
        })
    }

    /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
    #[staticmethod]
    fn bloch(theta: f64, phi: f64) -> PyResult<Self> {
        let a = BlochAngles::new(theta, phi).map_err(err)?;
        Ok(PyPureState {
            inner: qubit::bloch_to_state(&a),
        })
    }

    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        Ok(PyPureState {
            inner: urel_core::quantum::random_pure_state(dim, seed).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// The qubit state (-conj b, conj a) orthogonal to (a, b).
    fn orthogonal(&self) -> PyResult<Self> {
        Ok(PyPureState {
            inner: urel_core::quantum::orthogonal_qubit(&self.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("PureState({:?})", self.inner.amplitudes())
    }
}

#[pyclass(name = "DensityMatrix", module = "urel", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: urel_core::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: urel_core::DensityMatrix::from_rows(&rows).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_stokes(s0: f64, s1: f64, s2: f64, s3: f64) -> PyResult<Self> {
        let s = StokesVector::new(s0, s1, s2, s3).map_err(err)?;
        Ok(PyDensityMatrix {
            inner: qubit::stokes_to_density(&s).map_err(err)?,
        })
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: urel_core::DensityMatrix::maximally_mixed(dim).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        self.inner.matrix().rows()
    }

    /// Normalized Stokes vector [1, S1, S2, S3] of a qubit state.
    fn stokes(&self) -> PyResult<[f64; 4]> {
        Ok(qubit::density_to_stokes(&self.inner).map_err(err)?.components())
    }
}

#[derive(FromPyObject)]
enum StateArg {
    Pure(PyPureState),
    Mixed(PyDensityMatrix),
}

impl StateArg {
    fn into_state(self) -> QuantumState {
        match self {
            StateArg::Pure(p) => QuantumState::Pure(p.inner),
            StateArg::Mixed(m) => QuantumState::Mixed(m.inner),
        }
    }
}

#[pyfunction]
fn expectation(obs: &PyObservable, state: StateArg) -> PyResult<f64> {
    urel_core::quantum::expectation(&obs.inner, &state.into_state()).map_err(err)
}

#[pyfunction]
fn variance(obs: &PyObservable, state: StateArg) -> PyResult<f64> {
    urel_core::quantum::variance(&obs.inner, &state.into_state()).map_err(err)
}

/// <[A, B]> as a Python complex.
#[pyfunction]
fn commutator_expectation(a: &PyObservable, b: &PyObservable, state: StateArg) -> PyResult<Complex64> {
    urel_core::quantum::commutator_expectation(&a.inner, &b.inner, &state.into_state()).map_err(err)
}

/// Every applicable relation for the given observables and state.
///
/// Returns a list of dicts with keys `relation`, `pair`, `lhs`, `rhs`,
/// `slack`, `holds`, `skipped` (a reason string, or None when evaluated).
#[pyfunction]
#[pyo3(signature = (observables, state, pairwise = false))]
fn evaluate_all<'py>(
    py: Python<'py>,
    observables: Vec<PyObservable>,
    state: StateArg,
    pairwise: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let set = ObservableSet::new(observables.into_iter().map(|o| o.inner).collect()).map_err(err)?;
    let outcomes = bounds::evaluate_all(&set, &state.into_state(), EvaluateOptions { pairwise }).map_err(err)?;
    outcomes
        .iter()
        .map(|o| {
            let d = PyDict::new(py);
            d.set_item("relation", o.label)?;
            d.set_item("pair", o.pair)?;
            match &o.outcome {
                Outcome::Report(r) => {
                    d.set_item("lhs", r.lhs)?;
                    d.set_item("rhs", r.rhs)?;
                    d.set_item("slack", r.slack)?;
                    d.set_item("holds", r.holds)?;
                    d.set_item("skipped", py.None())?;
                }
                Outcome::Skipped(why) => {
                    for k in ["lhs", "rhs", "slack", "holds"] {
                        d.set_item(k, py.None())?;
                    }
                    d.set_item("skipped", why.to_string())?;
                }
            }
            Ok(d)
        })
        .collect()
}

/// Pauli expectations and derived moments of |psi(theta, phi)>.
#[pyfunction]
fn moments_from_angles(py: Python<'_>, theta: f64, phi: f64) -> PyResult<Py<PyAny>> {
    let a = BlochAngles::new(theta, phi).map_err(err)?;
    to_py_json(py, &qubit::moments_from_angles(&a))
}

/// Closed-form lhs and rhs of a sum-form relation from Pauli expectations.
#[pyfunction]
fn closed_form_rhs(relation: &str, ex: f64, ey: f64, ez: f64) -> PyResult<(f64, f64)> {
    let m = qubit::moments_from_expectations(ex, ey, ez).map_err(err)?;
    let r: RelationId = relation.parse().map_err(err)?;
    Ok((qubit::closed_form_lhs(&m), qubit::closed_form_rhs(&m, r).map_err(err)?))
}

/// Binomial counts per basis: list of (basis, n_plus, n_minus).
#[pyfunction]
#[pyo3(signature = (state, shots, seed, bases = "xyz"))]
fn simulate_counts(state: StateArg, shots: u64, seed: u64, bases: &str) -> PyResult<Vec<(String, u64, u64)>> {
    let bases = bases
        .chars()
        .map(|c| axis(&c.to_string()))
        .collect::<PyResult<Vec<_>>>()?;
    let plan = ShotPlan::new(shots, seed, bases).map_err(err)?;
    let recs = shots::simulate_counts(&state.into_state(), &plan).map_err(err)?;
    Ok(recs
        .iter()
        .map(|r| (r.basis.to_string(), r.n_plus, r.n_minus))
        .collect())
}

type LabelledEstimate = (String, (f64, f64), (f64, f64));

/// Bootstrap estimates: list of (label, (lhs, lhs_err), (rhs, rhs_err)).
#[pyfunction]
#[pyo3(signature = (records, relations = None, resamples = DEFAULT_RESAMPLES, seed = 0))]
fn bootstrap_bounds(
    records: Vec<(String, u64, u64)>,
    relations: Option<Vec<String>>,
    resamples: usize,
    seed: u64,
) -> PyResult<Vec<LabelledEstimate>> {
    let recs = records
        .iter()
        .map(|(b, p, m)| {
            Ok(MeasurementRecord {
                basis: axis(b)?,
                n_plus: *p,
                n_minus: *m,
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let rels = self::relations(relations)?;
    let est = shots::bootstrap_bounds(&recs, &rels, resamples, seed).map_err(err)?;
    Ok(rels
        .iter()
        .map(|r| {
            let e = est[r];
            (
                r.label().to_string(),
                (e.lhs.value, e.lhs.std_error),
                (e.rhs.value, e.rhs.std_error),
            )
        })
        .collect())
}

/// Theta or phi sweep; rows as dicts. Exact unless `shots` is given.
#[pyfunction]
#[pyo3(signature = (mode = "theta", fixed = None, steps = None, shots = None, seed = 0, resamples = DEFAULT_RESAMPLES, relations = None))]
#[allow(clippy::too_many_arguments)]
fn run_sweep(
    py: Python<'_>,
    mode: &str,
    fixed: Option<f64>,
    steps: Option<usize>,
    shots: Option<u64>,
    seed: u64,
    resamples: usize,
    relations: Option<Vec<String>>,
) -> PyResult<Py<PyAny>> {
    let mut spec = match mode {
        "theta" => SweepSpec::theta_default(),
        "phi" => SweepSpec::phi_default(),
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be theta or phi, got {other:?}"
            )))
        }
    };
    if let Some(f) = fixed {
        spec.fixed_value = f;
    }
    if let Some(n) = steps {
        spec.steps = n;
    }
    spec.relations = self::relations(relations)?;
    spec.resamples = resamples;
    if let Some(n) = shots {
        spec.shots = Some(ShotPlan::full(n, seed).map_err(err)?);
    }
    let rows = py.detach(|| sweep::run_sweep(&spec)).map_err(err)?;
    to_py_json(py, &rows)
}

/// Randomized verification campaign; the summary as a dict.
#[pyfunction]
#[pyo3(signature = (trials, dims = vec![2, 3, 4], counts = vec![2, 3, 4, 5], seed = 0, paulis = false))]
fn run_verify(
    py: Python<'_>,
    trials: u64,
    dims: Vec<usize>,
    counts: Vec<usize>,
    seed: u64,
    paulis: bool,
) -> PyResult<Py<PyAny>> {
    let config = if paulis {
        VerifyConfig::pauli(trials, seed)
    } else {
        VerifyConfig::random(trials, dims, counts, seed)
    };
    let summary = py.detach(|| verify::run_verify(&config)).map_err(err)?;
    to_py_json(py, &summary)
}

#[pymodule]
fn urel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyObservable>()?;
    m.add_class::<PyPureState>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(expectation, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_all, m)?)?;
    m.add_function(wrap_pyfunction!(moments_from_angles, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_counts, m)?)?;
    m.add_function(wrap_pyfunction!(bootstrap_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add("__version__", urel_core::harness::emit::VERSION)?;
    Ok(())
}
