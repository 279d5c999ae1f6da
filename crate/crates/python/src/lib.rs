//! Python bindings: `import pyanticipative`.

use anticipative::bloch::{self, Vec3};
use anticipative::curves::{curve_rows, SimulationSettings};
use anticipative::sim::{self, BasisMode, NoiseModel};
use anticipative::solver::{self, Order};
use anticipative::task::{self, MeasurementKind, QubitLabel, ScenarioId, TaskParams};
use anticipative::verify::{run_verification, VerifyOptions};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: anticipative::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind(name: &str) -> PyResult<MeasurementKind> {
    name.parse().map_err(err)
}

fn params(theta: f64) -> PyResult<TaskParams> {
    TaskParams::new(theta).map_err(err)
}

fn scenario(kind_name: &str, k: usize) -> PyResult<ScenarioId> {
    ScenarioId::new(kind(kind_name)?, k).map_err(err)
}

fn vec3(v: Vec3) -> [f64; 3] {
    v.0
}

/// Qubit operator `scalar·1 + bloch·σ`.
#[pyclass(name = "HermitianOp", from_py_object)]
#[derive(Clone, Copy)]
struct PyHermitianOp {
    inner: bloch::HermitianOp,
}

#[pymethods]
impl PyHermitianOp {
    #[new]
    fn new(scalar: f64, bloch: [f64; 3]) -> Self {
        PyHermitianOp {
            inner: bloch::HermitianOp::new(scalar, Vec3(bloch)),
        }
    }

    #[getter]
    fn scalar(&self) -> f64 {
        self.inner.scalar
    }

    #[getter]
    fn bloch(&self) -> [f64; 3] {
        vec3(self.inner.bloch)
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn eigenvalues(&self) -> (f64, f64) {
        self.inner.eigenvalues()
    }

    #[pyo3(signature = (tol = bloch::DEFAULT_TOL))]
    fn is_positive(&self, tol: f64) -> bool {
        self.inner.is_positive(tol)
    }

    #[pyo3(signature = (tol = bloch::DEFAULT_TOL))]
    fn is_effect(&self, tol: f64) -> bool {
        self.inner.is_effect(tol)
    }

    fn __repr__(&self) -> String {
        format!("HermitianOp({}, {})", self.inner.scalar, self.inner.bloch)
    }
}

#[pyfunction]
fn trace_product(a: PyHermitianOp, b: PyHermitianOp) -> f64 {
    bloch::trace_product(&a.inner, &b.inner)
}

#[pyfunction]
fn projector(direction: [f64; 3]) -> PyResult<PyHermitianOp> {
    let inner = bloch::projector(Vec3(direction)).map_err(err)?;
    Ok(PyHermitianOp { inner })
}

/// Effects of the standard or anticipative measurement as `(label, op)` pairs.
#[pyfunction]
fn measurement(kind_name: &str, theta: f64) -> PyResult<Vec<(String, PyHermitianOp)>> {
    let m = kind(kind_name)?.measurement(&params(theta)?);
    Ok(m.effects()
        .iter()
        .map(|(l, e)| (l.to_string(), PyHermitianOp { inner: *e }))
        .collect())
}

/// `(inputs, outcomes, rows)`.
type Table = (Vec<String>, Vec<String>, Vec<Vec<f64>>);

/// Born table `p(x, z)` as `(inputs, outcomes, rows)`.
#[pyfunction]
fn joint_table(kind_name: &str, theta: f64) -> PyResult<Table> {
    let p = params(theta)?;
    let k = kind(kind_name)?;
    let t = bloch::joint_table(&task::make_ensemble(&p), &k.measurement(&p), bloch::DEFAULT_TOL).map_err(err)?;
    Ok((
        t.inputs().iter().map(ToString::to_string).collect(),
        t.outcomes().iter().map(ToString::to_string).collect(),
        t.rows(),
    ))
}

#[pyfunction]
fn closed_form(kind_name: &str, k: usize, theta: f64) -> PyResult<f64> {
    Ok(task::closed_form(scenario(kind_name, k)?, &params(theta)?))
}

/// Same quantity as `closed_form`, computed from the Born table with the
/// posterior-maximizing post-processing.
#[pyfunction]
fn pipeline_success(kind_name: &str, k: usize, theta: f64) -> PyResult<f64> {
    task::pipeline_success(scenario(kind_name, k)?, &params(theta)?).map_err(err)
}

/// `(P+, P-, Q+, Q-)`.
#[pyfunction]
fn pq_values(theta: f64) -> PyResult<(f64, f64, f64, f64)> {
    let v = task::pq_values(&params(theta)?);
    Ok((v.p_plus, v.p_minus, v.q_plus, v.q_minus))
}

/// `(m, n)` Bloch directions of the anticipative measurement.
#[pyfunction]
fn anticipative_directions(theta: f64) -> PyResult<([f64; 3], [f64; 3])> {
    let (m, n) = task::anticipative_directions(&params(theta)?);
    Ok((vec3(m), vec3(n)))
}

#[pyfunction]
fn cos_omega(theta: f64) -> PyResult<f64> {
    Ok(task::cos_omega(&params(theta)?))
}

#[pyfunction]
fn priority_table(kind_name: &str) -> PyResult<Vec<(String, Vec<String>)>> {
    Ok(task::priority_table(kind(kind_name)?)
        .iter()
        .map(|(z, order)| (z.to_string(), order.iter().map(ToString::to_string).collect()))
        .collect())
}

#[pyfunction]
fn default_grid() -> Vec<f64> {
    task::default_grid()
}

#[pyclass(get_all, skip_from_py_object)]
#[derive(Clone)]
struct Solution {
    theta: f64,
    k: usize,
    normalization: f64,
    lambda_: f64,
    success: f64,
    functions: usize,
    maximizers: usize,
    certified: bool,
    /// `(label, unit Bloch direction)` of the four reduced effects.
    directions: Vec<(String, [f64; 3])>,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(theta={}, k={}, C={}, lambda={}, success={}, certified={})",
            self.theta, self.k, self.normalization, self.lambda_, self.success, self.certified
        )
    }
}

/// Builds the auxiliary ensemble, certifies the theorem measurements and
/// reduces them to the four-outcome measurement.
#[pyfunction]
#[pyo3(signature = (theta, k, tol = bloch::DEFAULT_TOL))]
fn solve(theta: f64, k: usize, tol: f64) -> PyResult<Solution> {
    let p = params(theta)?;
    let aux = solver::build_auxiliary(theta, k).map_err(err)?;
    let (lambda, maximizers) = solver::lambda_argmax(&aux);
    let ab = solver::theorem_measurement(&p, k, Order::AB).map_err(err)?;
    let ba = solver::theorem_measurement(&p, k, Order::BA).map_err(err)?;
    let certified = solver::certify_optimal(&aux, &ab.measurement, tol) && solver::certify_optimal(&aux, &ba.measurement, tol);
    let (povm, _) = solver::reduce_to_povm(&aux, &ab, &ba, tol).map_err(err)?;
    Ok(Solution {
        theta: p.theta(),
        k,
        normalization: aux.normalization(),
        lambda_: lambda,
        success: solver::anticipative_success(&aux),
        functions: aux.len(),
        maximizers: maximizers.len(),
        certified,
        directions: povm
            .effects()
            .iter()
            .map(|(l, e)| (l.to_string(), vec3(e.bloch.scale(1.0 / e.scalar))))
            .collect(),
    })
}

#[pyclass(get_all, skip_from_py_object)]
#[derive(Clone)]
struct CurveRow {
    theta: f64,
    kind: String,
    k: usize,
    analytic: f64,
    empirical: Option<f64>,
    stderr: Option<f64>,
}

#[pymethods]
impl CurveRow {
    fn __repr__(&self) -> String {
        format!(
            "CurveRow(theta={}, kind={}, k={}, analytic={}, empirical={})",
            self.theta,
            self.kind,
            self.k,
            self.analytic,
            self.empirical.map_or("None".to_string(), |v| v.to_string())
        )
    }
}

/// Analytic curves, with Monte Carlo estimates when `simulate` is true.
#[pyfunction]
#[pyo3(signature = (thetas = None, simulate = false, shots = sim::DEFAULT_SHOTS, seed = 1, depolarizing = 0.0, readout = NoiseModel::DEVICE_READOUT))]
fn curves(
    py: Python<'_>,
    thetas: Option<Vec<f64>>,
    simulate: bool,
    shots: usize,
    seed: u64,
    depolarizing: f64,
    readout: f64,
) -> PyResult<Vec<CurveRow>> {
    let thetas = thetas.unwrap_or_else(task::default_grid);
    let settings = if simulate {
        Some(SimulationSettings {
            shots,
            seed,
            noise: NoiseModel::new(depolarizing, readout).map_err(err)?,
            basis_mode: BasisMode::EqualSplit,
        })
    } else {
        None
    };
    let rows = py.detach(|| curve_rows(&thetas, settings.as_ref())).map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| CurveRow {
            theta: r.theta,
            kind: r.kind.name().to_string(),
            k: r.k,
            analytic: r.analytic,
            empirical: r.empirical,
            stderr: r.stderr,
        })
        .collect())
}

/// `(preparation, measurement)` rotation angles of one circuit.
#[pyfunction]
fn angle_schedule(theta: f64, prepared: &str, kind_name: &str, basis: &str) -> PyResult<(f64, f64)> {
    let prepared: QubitLabel = prepared.parse().map_err(err)?;
    let basis: QubitLabel = format!("+{basis}").parse().map_err(err)?;
    let s = sim::angle_schedule(theta, prepared, kind(kind_name)?, basis.axis).map_err(err)?;
    Ok((s.preparation, s.measurement))
}

#[pyfunction]
#[pyo3(signature = (theta, tol = 1e-12))]
fn native_decomposition_check(theta: f64, tol: f64) -> bool {
    sim::native_decomposition_check(theta, tol)
}

/// Runs the self-check suite; returns `(passed, report lines)`.
#[pyfunction]
#[pyo3(signature = (tol = bloch::DEFAULT_TOL, thetas = None))]
fn verify(py: Python<'_>, tol: f64, thetas: Option<Vec<f64>>) -> (bool, Vec<String>) {
    let opts = VerifyOptions {
        tol,
        thetas: thetas.unwrap_or_else(task::default_grid),
        tamper_normalization: None,
    };
    let report = py.detach(|| run_verification(&opts));
    (report.passed(), report.to_string().lines().map(str::to_string).collect())
}

#[pymodule]
fn pyanticipative(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHermitianOp>()?;
    m.add_class::<Solution>()?;
    m.add_class::<CurveRow>()?;
    m.add_function(wrap_pyfunction!(trace_product, m)?)?;
    m.add_function(wrap_pyfunction!(projector, m)?)?;
    m.add_function(wrap_pyfunction!(measurement, m)?)?;
    m.add_function(wrap_pyfunction!(joint_table, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline_success, m)?)?;
    m.add_function(wrap_pyfunction!(pq_values, m)?)?;
    m.add_function(wrap_pyfunction!(anticipative_directions, m)?)?;
    m.add_function(wrap_pyfunction!(cos_omega, m)?)?;
    m.add_function(wrap_pyfunction!(priority_table, m)?)?;
    m.add_function(wrap_pyfunction!(default_grid, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(curves, m)?)?;
    m.add_function(wrap_pyfunction!(angle_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(native_decomposition_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
