//! Python bindings for the `mimetic_leapfrog` crate.

use ::mimetic_leapfrog as ml;
use ml::diagnostics;
use ml::maxwell3d::{self, MaxwellState};
use ml::mimetic3d::{self, DiffOp, Field3, FieldKind, GridSpec3, SecondOrder};
use ml::scalarwave3d::{self, ScalarWaveState};
use ml::{ode_system, oscillator, positivity1d, wave1d};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

create_exception!(mimetic_leapfrog, InstabilityError, PyArithmeticError);

fn to_py(e: ml::Error) -> PyErr {
    match e {
        ml::Error::Instability { step } => InstabilityError::new_err(format!("instability at step {step}")),
        e => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ml::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn kind_from_str(s: &str) -> PyResult<FieldKind> {
    FieldKind::ALL
        .into_iter()
        .find(|k| k.symbol() == s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown field kind `{s}`")))
}

fn diff_from_str(s: &str) -> PyResult<DiffOp> {
    Ok(match s {
        "G" => DiffOp::G,
        "R" => DiffOp::R,
        "D" => DiffOp::D,
        "G*" => DiffOp::GStar,
        "R*" => DiffOp::RStar,
        "D*" => DiffOp::DStar,
        _ => return Err(PyValueError::new_err(format!("unknown operator `{s}`"))),
    })
}

fn composite_from_str(s: &str) -> PyResult<SecondOrder> {
    Ok(match s {
        "laplacian_P" => SecondOrder::LaplacianP,
        "laplacian_V" => SecondOrder::LaplacianV,
        "curlcurl_C" => SecondOrder::CurlCurlC,
        "curlcurl_S" => SecondOrder::CurlCurlS,
        "laplacian_Pstar" => SecondOrder::LaplacianPStar,
        "curlcurl_Cstar" => SecondOrder::CurlCurlCStar,
        _ => return Err(PyValueError::new_err(format!("unknown composite `{s}`"))),
    })
}

/// Periodic 3D lattice.
#[pyclass(name = "Grid", frozen, from_py_object)]
#[derive(Clone)]
struct PyGrid(GridSpec3);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (nx, ny, nz, dx=1.0, dy=1.0, dz=1.0))]
    fn new(nx: usize, ny: usize, nz: usize, dx: f64, dy: f64, dz: f64) -> PyResult<Self> {
        GridSpec3::new(nx, ny, nz, dx, dy, dz).py().map(PyGrid)
    }

    #[getter]
    fn shape(&self) -> (usize, usize, usize) {
        (self.0.nx, self.0.ny, self.0.nz)
    }

    #[getter]
    fn spacing(&self) -> (f64, f64, f64) {
        (self.0.dx, self.0.dy, self.0.dz)
    }

    fn __repr__(&self) -> String {
        let g = &self.0;
        format!(
            "Grid({}, {}, {}, dx={}, dy={}, dz={})",
            g.nx, g.ny, g.nz, g.dx, g.dy, g.dz
        )
    }
}

/// Discrete field of one of the eight kinds `S_N, V_E, V_F, S_C, S_C*,
/// V_F*, V_E*, S_N*`.
#[pyclass(name = "Field", frozen, from_py_object)]
#[derive(Clone)]
struct PyField(Field3);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (kind, grid, data=None))]
    fn new(kind: &str, grid: &PyGrid, data: Option<Vec<f64>>) -> PyResult<Self> {
        let kind = kind_from_str(kind)?;
        match data {
            Some(d) => Field3::from_vec(kind, grid.0, d).py().map(PyField),
            None => Ok(PyField(Field3::zeros(kind, grid.0))),
        }
    }

    #[staticmethod]
    fn random(kind: &str, grid: &PyGrid, seed: u64) -> PyResult<Self> {
        Ok(PyField(Field3::random(kind_from_str(kind)?, grid.0, seed)))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().symbol()
    }

    #[getter]
    fn dim_exponent(&self) -> i32 {
        self.0.kind().dim_exponent()
    }

    fn data(&self) -> Vec<f64> {
        self.0.data().to_vec()
    }

    fn component(&self, c: usize) -> PyResult<Vec<f64>> {
        if c >= self.0.kind().components() {
            return Err(PyValueError::new_err(format!("{} has no component {c}", self.0.kind())));
        }
        Ok(self.0.component(c).to_vec())
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn __repr__(&self) -> String {
        format!("Field({}, max_abs={:e})", self.0.kind(), self.0.max_abs())
    }
}

/// Scalar-diagonal material lattices `a, b, A, B`.
#[pyclass(name = "Material", frozen, from_py_object)]
#[derive(Clone)]
struct PyMaterial(Arc<mimetic3d::Material>);

#[pymethods]
impl PyMaterial {
    #[staticmethod]
    fn unit(grid: &PyGrid) -> Self {
        PyMaterial(Arc::new(mimetic3d::Material::unit(grid.0)))
    }

    #[staticmethod]
    #[pyo3(signature = (grid, a=1.0, b=1.0, upper_a=1.0, upper_b=1.0))]
    fn constant(grid: &PyGrid, a: f64, b: f64, upper_a: f64, upper_b: f64) -> PyResult<Self> {
        mimetic3d::Material::constant(grid.0, a, b, upper_a, upper_b)
            .py()
            .map(|m| PyMaterial(Arc::new(m)))
    }

    #[staticmethod]
    fn random(grid: &PyGrid, lo: f64, hi: f64, seed: u64) -> PyResult<Self> {
        mimetic3d::Material::random(grid.0, lo, hi, seed)
            .py()
            .map(|m| PyMaterial(Arc::new(m)))
    }

    /// `A = eps` on edges and `B = mu` on faces, each given as `3·nx·ny·nz`
    /// values.
    #[staticmethod]
    fn maxwell(grid: &PyGrid, eps: Vec<f64>, mu: Vec<f64>) -> PyResult<Self> {
        mimetic3d::Material::maxwell(grid.0, eps, mu)
            .py()
            .map(|m| PyMaterial(Arc::new(m)))
    }
}

#[pyfunction]
fn apply_diff(op: &str, f: &PyField) -> PyResult<PyField> {
    mimetic3d::apply_diff(diff_from_str(op)?, &f.0).py().map(PyField)
}

#[pyfunction]
fn inner(space: &str, f1: &PyField, f2: &PyField, mat: &PyMaterial) -> PyResult<f64> {
    mimetic3d::inner(kind_from_str(space)?, &f1.0, &f2.0, &mat.0).py()
}

#[pyfunction]
fn second_order(kind: &str, mat: &PyMaterial, f: &PyField) -> PyResult<PyField> {
    mimetic3d::second_order(composite_from_str(kind)?, &mat.0, &f.0)
        .py()
        .map(PyField)
}

#[pyfunction]
#[pyo3(signature = (kind, mat, tol=1e-10))]
fn operator_norm_estimate(kind: &str, mat: &PyMaterial, tol: f64) -> PyResult<f64> {
    mimetic3d::operator_norm_estimate(composite_from_str(kind)?, &mat.0, tol).py()
}

/// Relative residuals `(adjoint1, adjoint2, adjoint3)`.
#[pyfunction]
fn check_adjoints(grid: &PyGrid, mat: &PyMaterial, seed: u64) -> PyResult<(f64, f64, f64)> {
    let r = mimetic3d::check_adjoints(&grid.0, &mat.0, seed).py()?;
    Ok((r.adjoint1, r.adjoint2, r.adjoint3))
}

#[pyfunction]
fn check_exactness(grid: &PyGrid, seed: u64) -> PyResult<HashMap<&'static str, f64>> {
    let r = mimetic3d::check_exactness(&grid.0, seed).py()?;
    Ok(HashMap::from([
        ("grad_const", r.grad_const),
        ("RG", r.rg),
        ("DR", r.dr),
        ("Gstar_const", r.gstar_const),
        ("RstarGstar", r.rstar_gstar),
        ("DstarRstar", r.dstar_rstar),
    ]))
}

/// Leapfrog oscillator from `(u0, v0)`. Returns `u^n`, `v^{n+1/2}` and the
/// conserved pair `C^n`, `C^{n+1/2}` for `n = 1..steps`.
#[pyfunction]
fn oscillator_run(omega: f64, dt: f64, u0: f64, v0: f64, steps: usize) -> PyResult<HashMap<&'static str, Vec<f64>>> {
    let start = oscillator::init_from_pair(u0, v0, omega, dt).py()?;
    let states = oscillator::run_leapfrog(start, steps).py()?;
    let mut cn = Vec::new();
    let mut ch = Vec::new();
    for w in states.windows(2) {
        cn.push(oscillator::conserved(oscillator::OscWindow::Staggered(w), oscillator::ConservedKind::Cn).py()?);
        ch.push(oscillator::conserved(oscillator::OscWindow::Staggered(w), oscillator::ConservedKind::CHalf).py()?);
    }
    Ok(HashMap::from([
        ("u", states.iter().map(|s| s.u).collect()),
        ("v_half", states.iter().map(|s| s.v_half).collect()),
        ("C_n", cn),
        ("C_half", ch),
    ]))
}

/// Crank–Nicolson oscillator; returns `(u, v)` sequences of length
/// `steps + 1`.
#[pyfunction]
fn crank_nicolson_run(omega: f64, dt: f64, u0: f64, v0: f64, steps: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let mut s = oscillator::CNState::new(u0, v0, omega, dt).py()?;
    let (mut u, mut v) = (vec![s.u], vec![s.v]);
    for _ in 0..steps {
        s = oscillator::crank_nicolson_step(&s);
        u.push(s.u);
        v.push(s.v);
    }
    Ok((u, v))
}

/// Skew system with a dense row-major matrix. Returns `(C_n, C_half)`
/// sequences for `n = 1..steps`.
#[pyfunction]
fn skew_run(
    rows: usize,
    cols: usize,
    matrix: Vec<f64>,
    f0: Vec<f64>,
    g0: Vec<f64>,
    dt: f64,
    steps: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let op = ode_system::SkewOperator::new(rows, cols, matrix).py()?;
    let mut prev = ode_system::init_g_half(&f0, &g0, &op, dt).py()?;
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    for _ in 0..steps {
        let next = ode_system::leapfrog_step(&prev, &op).py()?;
        let w = [prev, next];
        cn.push(ode_system::conserved(&w, &op, ode_system::ConservedKind::Cn).py()?);
        ch.push(ode_system::conserved(&w, &op, ode_system::ConservedKind::CHalf).py()?);
        let [_, next] = w;
        prev = next;
    }
    Ok((cn, ch))
}

#[pyfunction]
#[pyo3(signature = (rows, cols, matrix, tol=1e-12))]
fn skew_operator_norm(rows: usize, cols: usize, matrix: Vec<f64>, tol: f64) -> PyResult<f64> {
    let op = ode_system::SkewOperator::new(rows, cols, matrix).py()?;
    ode_system::operator_norm(&op, tol).py()
}

type WaveRun = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Periodic 1D wave. Returns `(u, v_half, C_n, C_half)` after `steps`.
#[pyfunction]
fn wave1d_run(u0: Vec<f64>, v0: Vec<f64>, c: f64, dt: f64, dx: f64, steps: usize) -> PyResult<WaveRun> {
    let mut prev = wave1d::init_v_half(u0, &v0, c, dt, dx).py()?;
    let (mut cn, mut ch) = (Vec::new(), Vec::new());
    for _ in 0..steps {
        let next = wave1d::leapfrog_step(&prev).py()?;
        let w = [prev, next];
        cn.push(wave1d::conserved(&w, wave1d::ConservedKind::Cn).py()?);
        ch.push(wave1d::conserved(&w, wave1d::ConservedKind::CHalf).py()?);
        let [_, next] = w;
        prev = next;
    }
    Ok((prev.u, prev.v_half, cn, ch))
}

#[pyfunction]
fn transport_step(rho: Vec<f64>, vel: Vec<f64>, dt: f64, dx: f64) -> PyResult<Vec<f64>> {
    let s = positivity1d::TransportState::new(rho, vel, dt, dx).py()?;
    positivity1d::transport_step(&s).py().map(|s| s.rho)
}

#[pyfunction]
fn diffusion_step(rho: Vec<f64>, d: Vec<f64>, dt: f64, dx: f64) -> PyResult<Vec<f64>> {
    let s = positivity1d::DiffusionState::new(rho, d, dt, dx).py()?;
    positivity1d::diffusion_step(&s).py().map(|s| s.rho)
}

#[pyfunction]
fn total_mass(rho: Vec<f64>, dx: f64) -> f64 {
    positivity1d::total_mass(&rho, dx)
}

/// `(max_abs_drift, max_rel_drift, first_value)` of a sequence.
#[pyfunction]
fn drift(values: Vec<f64>) -> PyResult<(f64, f64, f64)> {
    let r = diagnostics::drift_of(&values).py()?;
    Ok((r.max_abs_drift, r.max_rel_drift, r.first_value))
}

#[pyfunction]
fn convergence_order(points: Vec<(f64, f64)>) -> PyResult<f64> {
    diagnostics::convergence_order(&points).py()
}

/// Leapfrog 3D scalar wave started from `u0` with `v⁰ = 0`. A `u0` of kind
/// `S_N*` selects the starred scheme.
#[pyclass(name = "ScalarWave")]
struct PyScalarWave {
    prev: Option<ScalarWaveState>,
    cur: ScalarWaveState,
}

#[pymethods]
impl PyScalarWave {
    #[new]
    fn new(u0: &PyField, mat: &PyMaterial, dt: f64) -> PyResult<Self> {
        let var = scalarwave3d::ScalarVariant::from_u_kind(u0.0.kind()).py()?;
        let v0 = Field3::zeros(var.v_kind(), *u0.0.grid());
        let cur = scalarwave3d::init_v_half(u0.0.clone(), &v0, Arc::clone(&mat.0), dt).py()?;
        Ok(Self { prev: None, cur })
    }

    #[staticmethod]
    #[pyo3(signature = (mat, starred=false, tol=1e-10))]
    fn dt_max(mat: &PyMaterial, starred: bool, tol: f64) -> PyResult<f64> {
        let var = if starred {
            scalarwave3d::ScalarVariant::Starred
        } else {
            scalarwave3d::ScalarVariant::Primal
        };
        scalarwave3d::dt_max(&mat.0, var, tol).py()
    }

    #[pyo3(signature = (n=1))]
    fn step(&mut self, n: usize) -> PyResult<()> {
        for _ in 0..n {
            let next = scalarwave3d::leapfrog_step(&self.cur).py()?;
            self.prev = Some(std::mem::replace(&mut self.cur, next));
        }
        Ok(())
    }

    #[getter]
    fn n(&self) -> u64 {
        self.cur.n
    }

    #[getter]
    fn u(&self) -> PyField {
        PyField(self.cur.u.clone())
    }

    #[getter]
    fn v_half(&self) -> PyField {
        PyField(self.cur.v_half.clone())
    }

    /// `(C_n, C_half)` with `C_n` at the current step and `C_half` half a
    /// step earlier. Needs at least one step.
    fn conserved(&self) -> PyResult<(f64, f64)> {
        let prev = self
            .prev
            .clone()
            .ok_or_else(|| PyValueError::new_err("take a step first"))?;
        let w = [prev, self.cur.clone()];
        Ok((
            scalarwave3d::conserved(&w, scalarwave3d::ConservedKind::Cn).py()?,
            scalarwave3d::conserved(&w, scalarwave3d::ConservedKind::CHalf).py()?,
        ))
    }

    fn curl_diagnostic(&self) -> PyResult<f64> {
        scalarwave3d::curl_diagnostic(&self.cur).py()
    }
}

/// Maxwell leapfrog from `E0` with `H⁰ = 0`.
#[pyclass(name = "Maxwell")]
struct PyMaxwell {
    prev: Option<MaxwellState>,
    cur: MaxwellState,
}

#[pymethods]
impl PyMaxwell {
    #[new]
    fn new(e0: &PyField, mat: &PyMaterial, dt: f64) -> PyResult<Self> {
        let h0 = Field3::zeros(FieldKind::DualEdgeVector, *e0.0.grid());
        let cur = maxwell3d::init_h_half(e0.0.clone(), &h0, Arc::clone(&mat.0), dt).py()?;
        Ok(Self { prev: None, cur })
    }

    #[staticmethod]
    #[pyo3(signature = (mat, tol=1e-10))]
    fn cfl_estimate(mat: &PyMaterial, tol: f64) -> PyResult<f64> {
        maxwell3d::cfl_estimate(&mat.0, tol).py()
    }

    #[pyo3(signature = (n=1))]
    fn step(&mut self, n: usize) -> PyResult<()> {
        for _ in 0..n {
            let next = maxwell3d::leapfrog_step(&self.cur).py()?;
            self.prev = Some(std::mem::replace(&mut self.cur, next));
        }
        Ok(())
    }

    #[getter]
    fn n(&self) -> u64 {
        self.cur.n
    }

    #[getter]
    fn e(&self) -> PyField {
        PyField(self.cur.e.clone())
    }

    #[getter]
    fn h_half(&self) -> PyField {
        PyField(self.cur.h_half.clone())
    }

    fn conserved(&self) -> PyResult<(f64, f64)> {
        let prev = self
            .prev
            .clone()
            .ok_or_else(|| PyValueError::new_err("take a step first"))?;
        let w = [prev, self.cur.clone()];
        Ok((
            maxwell3d::conserved(&w, maxwell3d::ConservedKind::Cn).py()?,
            maxwell3d::conserved(&w, maxwell3d::ConservedKind::CHalf).py()?,
        ))
    }

    fn divergence_diagnostics(&self) -> PyResult<(f64, f64)> {
        maxwell3d::divergence_diagnostics(&self.cur).py()
    }
}

/// Parses a JSON config, runs it into `out_dir` and returns the ledger CSV.
#[pyfunction]
#[pyo3(signature = (config, out_dir, quiet=true))]
fn run_config(config: &str, out_dir: &str, quiet: bool) -> PyResult<String> {
    let cfg = ml::config::parse_config(config).py()?;
    let opts = ml::runner::RunOptions {
        out_dir: out_dir.into(),
        quiet,
    };
    let summary = ml::runner::run_scenario(&cfg, &opts).py()?;
    Ok(summary.series.to_csv_string())
}

#[pymodule]
fn mimetic_leapfrog(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InstabilityError", m.py().get_type::<InstabilityError>())?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyScalarWave>()?;
    m.add_class::<PyMaxwell>()?;
    m.add_function(wrap_pyfunction!(apply_diff, m)?)?;
    m.add_function(wrap_pyfunction!(inner, m)?)?;
    m.add_function(wrap_pyfunction!(second_order, m)?)?;
    m.add_function(wrap_pyfunction!(operator_norm_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(check_adjoints, m)?)?;
    m.add_function(wrap_pyfunction!(check_exactness, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_run, m)?)?;
    m.add_function(wrap_pyfunction!(crank_nicolson_run, m)?)?;
    m.add_function(wrap_pyfunction!(skew_run, m)?)?;
    m.add_function(wrap_pyfunction!(skew_operator_norm, m)?)?;
    m.add_function(wrap_pyfunction!(wave1d_run, m)?)?;
    m.add_function(wrap_pyfunction!(transport_step, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_step, m)?)?;
    m.add_function(wrap_pyfunction!(total_mass, m)?)?;
    m.add_function(wrap_pyfunction!(drift, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_order, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
