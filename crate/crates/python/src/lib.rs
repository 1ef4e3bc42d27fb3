//! Python bindings: meshes, P1 functions, the transformation operator,
//! single solves, convergence studies and the property suite.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tmu_fem::verify::{run_suite, SuiteConfig, DEFAULT_SEED};
use tmu_fem::{FemError, ProblemKind, QuadratureScheme, RhsMode};

fn err(e: FemError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scheme(quad_order: usize, grading_depth: usize) -> PyResult<QuadratureScheme> {
    QuadratureScheme::default()
        .with_order(quad_order)
        .and_then(|s| s.with_depth(grading_depth))
        .map_err(err)
}

fn problem(name: &str, f_coeffs: Option<Vec<f64>>) -> PyResult<ProblemKind> {
    let kind: ProblemKind = name.parse().map_err(err)?;
    match (kind, f_coeffs) {
        (ProblemKind::Custom(_), Some(c)) => Ok(ProblemKind::Custom(c)),
        (kind, None) => Ok(kind),
        (_, Some(_)) => Err(PyValueError::new_err(
            "f_coeffs only applies to the custom problem",
        )),
    }
}

fn rhs_mode(mode: Option<&str>, kind: &ProblemKind) -> PyResult<RhsMode> {
    let mode = match mode {
        Some(m) => m.parse().map_err(err)?,
        None if matches!(kind, ProblemKind::Custom(_)) => RhsMode::Direct,
        None => RhsMode::Manufactured,
    };
    if *kind == ProblemKind::Singular && mode != RhsMode::Manufactured {
        return Err(PyValueError::new_err(format!(
            "the singular problem has f = u'' + mu u outside L2, so the {mode} load path is undefined"
        )));
    }
    Ok(mode)
}

/// Uniform mesh of `elements` intervals on `(0, horizon)`.
#[pyclass(name = "Mesh", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMesh(tmu_fem::Mesh1D);

#[pymethods]
impl PyMesh {
    #[new]
    fn new(horizon: f64, elements: usize) -> PyResult<Self> {
        tmu_fem::make_mesh(horizon, elements)
            .map(PyMesh)
            .map_err(err)
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.0.horizon()
    }

    #[getter]
    fn elements(&self) -> usize {
        self.0.elements()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h()
    }

    fn nodes(&self) -> Vec<f64> {
        self.0.nodes().to_vec()
    }

    fn element(&self, e: usize) -> PyResult<(f64, f64)> {
        if e >= self.0.elements() {
            return Err(PyValueError::new_err(format!("no element {e}")));
        }
        Ok(self.0.element(e))
    }

    fn locate(&self, t: f64) -> PyResult<usize> {
        self.0.locate(t).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh(horizon={}, elements={})",
            self.0.horizon(),
            self.0.elements()
        )
    }
}

/// Continuous piecewise linear function vanishing at t = 0.
#[pyclass(name = "FemFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyFemFunction(tmu_fem::FemFunction);

#[pymethods]
impl PyFemFunction {
    #[new]
    fn new(mesh: &PyMesh, coefficients: Vec<f64>) -> PyResult<Self> {
        tmu_fem::FemFunction::new(mesh.0.clone(), coefficients)
            .map(PyFemFunction)
            .map_err(err)
    }

    /// Hat function of node `j` (1-based).
    #[staticmethod]
    fn hat(mesh: &PyMesh, j: usize) -> PyResult<Self> {
        tmu_fem::FemFunction::hat(mesh.0.clone(), j)
            .map(PyFemFunction)
            .map_err(err)
    }

    /// Nodal interpolant of a Python callable with `g(0) == 0`.
    #[staticmethod]
    fn interpolate(mesh: &PyMesh, g: &Bound<'_, PyAny>) -> PyResult<Self> {
        let at_zero: f64 = g.call1((0.0,))?.extract()?;
        if at_zero.abs() > 1e-12 {
            return Err(PyValueError::new_err(format!(
                "g(0) = {at_zero}, expected 0"
            )));
        }
        let values = mesh.0.nodes()[1..]
            .iter()
            .map(|&t| g.call1((t,))?.extract::<f64>())
            .collect::<PyResult<Vec<f64>>>()?;
        Self::new(mesh, values)
    }

    #[getter]
    fn mesh(&self) -> PyMesh {
        PyMesh(self.0.mesh().clone())
    }

    #[getter]
    fn coefficients(&self) -> Vec<f64> {
        self.0.coefficients().to_vec()
    }

    fn __call__(&self, t: f64) -> PyResult<f64> {
        self.0.eval(t).map_err(err)
    }

    fn eval(&self, t: f64) -> PyResult<f64> {
        self.0.eval(t).map_err(err)
    }

    fn eval_deriv(&self, t: f64) -> PyResult<f64> {
        self.0.eval_deriv(t).map_err(err)
    }

    /// `sqrt(‖w'‖² + mu ‖w‖²)`.
    fn norm_h1mu(&self, mu: f64) -> f64 {
        tmu_fem::norm_h1mu(&self.0, mu)
    }

    fn __repr__(&self) -> String {
        format!("FemFunction(elements={})", self.0.mesh().elements())
    }
}

/// `(T_mu w)(t)`.
#[pyfunction]
fn apply_tmu(w: &PyFemFunction, mu: f64, t: f64) -> PyResult<f64> {
    tmu_fem::apply_tmu(&w.0, mu, t).map_err(err)
}

/// `(T_mu w)'(t)`.
#[pyfunction]
fn apply_tmu_deriv(w: &PyFemFunction, mu: f64, t: f64) -> PyResult<f64> {
    tmu_fem::apply_tmu_deriv(&w.0, mu, t).map_err(err)
}

/// Complex form of the transformation; its real part equals `apply_tmu`.
#[pyfunction]
fn apply_complex_t(w: &PyFemFunction, mu: f64, t: f64) -> PyResult<tmu_fem::ComplexSample> {
    tmu_fem::apply_complex_t(&w.0, mu, t).map_err(err)
}

/// Gauss-Legendre `(node, weight)` pairs on [-1, 1].
#[pyfunction]
fn gauss_nodes(order: usize) -> PyResult<Vec<(f64, f64)>> {
    tmu_fem::gauss_nodes(order).map(|r| r.to_vec()).map_err(err)
}

/// Solve a built-in problem on `elements` uniform elements.
#[pyfunction]
#[pyo3(signature = (problem, mu, elements, horizon = 1.0, rhs_mode = None, f_coeffs = None, quad_order = 8, grading_depth = 50))]
#[allow(clippy::too_many_arguments)]
fn solve(
    problem: &str,
    mu: f64,
    elements: usize,
    horizon: f64,
    rhs_mode: Option<&str>,
    f_coeffs: Option<Vec<f64>>,
    quad_order: usize,
    grading_depth: usize,
) -> PyResult<PyFemFunction> {
    let kind = self::problem(problem, f_coeffs)?;
    let mode = self::rhs_mode(rhs_mode, &kind)?;
    let spec = kind.build(mu, horizon).map_err(err)?;
    tmu_fem::solve_problem(&spec, elements, mode, &scheme(quad_order, grading_depth)?)
        .map(PyFemFunction)
        .map_err(err)
}

/// Error table as a list of dicts with keys
/// `mu, N, h, err_L2, eoc_L2, err_H1, eoc_H1`.
#[pyfunction]
#[pyo3(signature = (problem, mu_list, elements, horizon = 1.0, rhs_mode = None, error_rule = "gauss:5", quad_order = 8, grading_depth = 50))]
#[allow(clippy::too_many_arguments)]
fn run_study<'py>(
    py: Python<'py>,
    problem: &str,
    mu_list: Vec<f64>,
    elements: Vec<usize>,
    horizon: f64,
    rhs_mode: Option<&str>,
    error_rule: &str,
    quad_order: usize,
    grading_depth: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = self::problem(problem, None)?;
    let mode = self::rhs_mode(rhs_mode, &kind)?;
    let rule = error_rule.parse().map_err(err)?;
    let scheme = scheme(quad_order, grading_depth)?;
    let build = |mu: f64| kind.build(mu, horizon);
    let report = py
        .detach(|| {
            tmu_fem::run_study(
                kind.name(),
                &build,
                &mu_list,
                &elements,
                mode,
                rule,
                &scheme,
            )
        })
        .map_err(err)?;
    if let Some((mu, n, e)) = report.failures().next() {
        return Err(PyValueError::new_err(format!("mu = {mu}, N = {n}: {e}")));
    }
    let mut rows = Vec::new();
    for block in &report.blocks {
        for r in &block.rows {
            let d = PyDict::new(py);
            d.set_item("mu", block.mu)?;
            d.set_item("N", r.n)?;
            d.set_item("h", r.h)?;
            d.set_item("err_L2", r.err_l2)?;
            d.set_item("eoc_L2", r.eoc_l2)?;
            d.set_item("err_H1", r.err_h1)?;
            d.set_item("eoc_H1", r.eoc_h1)?;
            rows.push(d);
        }
    }
    Ok(rows)
}

/// Property suite; returns `(name, passed, worst, tolerance)` tuples.
#[pyfunction]
#[pyo3(signature = (seed = DEFAULT_SEED))]
fn verify(py: Python<'_>, seed: u64) -> PyResult<Vec<(String, bool, f64, f64)>> {
    let config = SuiteConfig {
        seed,
        ..SuiteConfig::default()
    };
    let outcomes = py.detach(|| run_suite(&config)).map_err(err)?;
    Ok(outcomes
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.worst, o.tolerance))
        .collect())
}

#[pymodule]
fn tmufem(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_class::<PyFemFunction>()?;
    m.add_function(wrap_pyfunction!(apply_tmu, m)?)?;
    m.add_function(wrap_pyfunction!(apply_tmu_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(apply_complex_t, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(run_study, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    Ok(())
}
