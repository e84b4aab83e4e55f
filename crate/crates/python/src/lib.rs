//! Python bindings. Matrices cross the boundary as nested lists of Python
//! `complex` (row-major); bipartite vectors as [`PyBipartiteVector`].

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use modkit::campaign::{run_campaign, CampaignConfig, Suite};
use modkit::inequalities::{self, InequalityReport, MonotoneFunction, MonotoneKind};
use modkit::matrix::{ComplexMatrix, RANK_TOL};
use modkit::{cone, kms, modular, random, schmidt, states, vec_ops};
use modkit::{BipartiteVector, DensityMatrix, PositiveFunctional};

pyo3::create_exception!(modkit, ModkitError, PyValueError);

fn err(e: modkit::Error) -> PyErr {
    ModkitError::new_err(e.to_string())
}

type Rows = Vec<Vec<Complex64>>;

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(ModkitError::new_err("ragged matrix: rows differ in length"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    Ok(ComplexMatrix::from_row_slice(r, c, &flat))
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

#[pyclass(name = "BipartiteVector", module = "modkit", skip_from_py_object)]
#[derive(Clone)]
struct PyBipartiteVector {
    inner: BipartiteVector,
}

#[pymethods]
impl PyBipartiteVector {
    #[new]
    fn new(dim_left: usize, dim_right: usize, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        if amplitudes.len() != dim_left * dim_right {
            return Err(ModkitError::new_err(format!(
                "{} amplitudes for dimensions {dim_left}x{dim_right}",
                amplitudes.len()
            )));
        }
        Ok(PyBipartiteVector {
            inner: BipartiteVector::new(dim_left, dim_right, amplitudes),
        })
    }

    /// `vec(M)` for a matrix given as nested lists.
    #[staticmethod]
    fn from_matrix(rows: Rows) -> PyResult<Self> {
        Ok(PyBipartiteVector {
            inner: vec_ops::vec(&to_matrix(rows)?),
        })
    }

    #[getter]
    fn dims(&self) -> (usize, usize) {
        self.inner.dims()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes.iter().copied().collect()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn inner_product(&self, other: &PyBipartiteVector) -> Complex64 {
        self.inner.inner(&other.inner)
    }

    fn to_matrix(&self) -> Rows {
        to_rows(&vec_ops::unvec(&self.inner))
    }

    fn __repr__(&self) -> String {
        let (l, r) = self.inner.dims();
        format!("BipartiteVector({l}x{r}, norm={:.6})", self.inner.norm())
    }
}

#[pyclass(name = "DensityMatrix", module = "modkit", skip_from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Rows) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: DensityMatrix::new(to_matrix(rows)?).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_diagonal(weights: Vec<f64>) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: DensityMatrix::from_diagonal(&weights).map_err(err)?,
        })
    }

    /// Random faithful state from the seeded generator.
    #[staticmethod]
    fn random(dim: usize, seed: u64) -> Self {
        let m = random::random_density(&mut random::seeded_rng(seed), dim);
        PyDensityMatrix {
            inner: DensityMatrix::new(m).expect("sampled densities are valid"),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.spectrum().eigenvalues.clone()
    }

    fn matrix(&self) -> Rows {
        to_rows(self.inner.matrix())
    }

    fn is_faithful(&self) -> bool {
        self.inner.is_faithful(states::SINGULARITY_TOL)
    }

    /// Canonical purification `vec(√D)`.
    fn purify(&self) -> PyBipartiteVector {
        PyBipartiteVector {
            inner: states::purify(&self.inner),
        }
    }

    fn expectation(&self, rows: Rows) -> PyResult<Complex64> {
        let a = to_matrix(rows)?;
        if a.shape() != (self.inner.dim(), self.inner.dim()) {
            return Err(ModkitError::new_err("operator shape does not match the state"));
        }
        Ok(self.inner.evaluate(&a))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={})", self.inner.dim())
    }
}

#[pyclass(name = "InequalityReport", module = "modkit", skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyInequalityReport {
    name: String,
    lhs: f64,
    rhs: f64,
    slack: f64,
    passed: bool,
}

impl From<InequalityReport> for PyInequalityReport {
    fn from(r: InequalityReport) -> Self {
        PyInequalityReport {
            name: r.name.to_string(),
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            passed: r.pass,
        }
    }
}

#[pymethods]
impl PyInequalityReport {
    fn __repr__(&self) -> String {
        format!(
            "InequalityReport({}, lhs={:.6}, rhs={:.6}, slack={:.3e}, passed={})",
            self.name, self.lhs, self.rhs, self.slack, self.passed
        )
    }
}

#[pyfunction]
fn kron(a: Rows, b: Rows) -> PyResult<Rows> {
    Ok(to_rows(&vec_ops::kron(&to_matrix(a)?, &to_matrix(b)?)))
}

/// Returns `(coefficients, rank)`.
#[pyfunction]
fn schmidt_decompose(v: &PyBipartiteVector) -> PyResult<(Vec<f64>, usize)> {
    let data = schmidt::schmidt_decompose(&v.inner, RANK_TOL).map_err(err)?;
    Ok((data.coefficients, data.rank))
}

#[pyfunction]
fn is_cyclic_separating(v: &PyBipartiteVector) -> PyResult<bool> {
    schmidt::is_cyclic_separating(&v.inner, RANK_TOL).map_err(err)
}

#[pyfunction]
fn reduced_state(v: &PyBipartiteVector) -> Rows {
    to_rows(&vec_ops::reduced_left(&v.inner))
}

/// Dense `Δ_{φ,ω} = D_φ ⊗ (D_ω⁻¹)ᵀ` on the row-major `vec` basis.
#[pyfunction]
fn relative_modular_operator(phi: &PyDensityMatrix, omega: &PyDensityMatrix) -> PyResult<Rows> {
    let delta = modular::relative_modular_operator(&phi.inner, &omega.inner).map_err(err)?;
    Ok(to_rows(&delta.matrix))
}

/// Same operator assembled as `S*S` from the action of `S` on matrix units.
#[pyfunction]
fn relative_modular_from_s(phi: &PyDensityMatrix, omega: &PyDensityMatrix) -> PyResult<Rows> {
    let delta = modular::relative_modular_from_s(&phi.inner, &omega.inner).map_err(err)?;
    Ok(to_rows(&delta.matrix))
}

#[pyfunction]
fn polar_residual(phi: &PyDensityMatrix, omega: &PyDensityMatrix) -> PyResult<f64> {
    modular::polar_residual(&phi.inner, &omega.inner).map_err(err)
}

#[pyfunction]
fn modular_flow(omega: &PyDensityMatrix, a: Rows, t: f64) -> PyResult<Rows> {
    Ok(to_rows(&modular::modular_flow(&omega.inner, &to_matrix(a)?, t).map_err(err)?))
}

#[pyfunction]
fn connes_cocycle(phi: &PyDensityMatrix, omega: &PyDensityMatrix, t: f64) -> PyResult<Rows> {
    Ok(to_rows(&modular::connes_cocycle(&phi.inner, &omega.inner, t).map_err(err)?))
}

/// Tomita–Takesaki residuals over the matrix-unit basis.
#[pyfunction]
#[pyo3(signature = (omega, t_grid = vec![0.3, 1.0, 2.7]))]
fn verify_tomita_takesaki<'py>(
    py: Python<'py>,
    omega: &PyDensityMatrix,
    t_grid: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let basis = modular::matrix_unit_basis(omega.inner.dim());
    let r = modular::verify_tomita_takesaki(&omega.inner, &basis, &t_grid).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("max_commutator", r.max_commutator)?;
    out.set_item("max_commutant_form", r.max_commutant_form)?;
    out.set_item("max_flow_residual", r.max_flow_residual)?;
    out.set_item("samples", r.samples)?;
    out.set_item("passed", r.pass)?;
    Ok(out)
}

/// `F(z) = ω(A σ_z(B))` for the Gibbs system of `state` at inverse temperature `beta`.
#[pyfunction]
fn kms_function(state: &PyDensityMatrix, beta: f64, a: Rows, b: Rows, z: Complex64) -> PyResult<Complex64> {
    let sys = kms::gibbs_hamiltonian(&state.inner, beta).map_err(err)?;
    kms::kms_function(&sys, &to_matrix(a)?, &to_matrix(b)?, z).map_err(err)
}

/// `ω(σ_t(B) A)`.
#[pyfunction]
fn kms_boundary_value(state: &PyDensityMatrix, beta: f64, a: Rows, b: Rows, t: f64) -> PyResult<Complex64> {
    let sys = kms::gibbs_hamiltonian(&state.inner, beta).map_err(err)?;
    kms::kms_boundary_value(&sys, &to_matrix(a)?, &to_matrix(b)?, t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (state, gap_tol = kms::GAP_TOL))]
fn centralizer_basis(state: &PyDensityMatrix, gap_tol: f64) -> Vec<Rows> {
    kms::centralizer_basis(&state.inner, gap_tol).iter().map(to_rows).collect()
}

#[pyfunction]
#[pyo3(signature = (v, tol = 1e-10))]
fn cone_contains(v: &PyBipartiteVector, tol: f64) -> PyResult<bool> {
    cone::cone_contains(&v.inner, tol).map_err(err)
}

/// The four cone vectors with `v = c₁ − c₂ + i c₃ − i c₄`.
#[pyfunction]
fn cone_decompose(v: &PyBipartiteVector) -> PyResult<Vec<PyBipartiteVector>> {
    let parts = cone::decompose_general(&v.inner).map_err(err)?;
    Ok(parts
        .into_iter()
        .map(|p| PyBipartiteVector { inner: p.vector })
        .collect())
}

#[pyfunction]
fn norm_sandwich(x: Rows, y: Rows) -> PyResult<(PyInequalityReport, PyInequalityReport)> {
    let (lo, hi) = inequalities::norm_sandwich(&to_matrix(x)?, &to_matrix(y)?).map_err(err)?;
    Ok((lo.into(), hi.into()))
}

#[pyfunction]
fn powers_stormer(a: Rows, b: Rows) -> PyResult<PyInequalityReport> {
    Ok(inequalities::powers_stormer(&to_matrix(a)?, &to_matrix(b)?).map_err(err)?.into())
}

#[pyfunction]
fn ozawa(a: Rows, b: Rows, s: f64) -> PyResult<PyInequalityReport> {
    Ok(inequalities::ozawa_s(&to_matrix(a)?, &to_matrix(b)?, s).map_err(err)?.into())
}

/// Returns the report and the gap between the superoperator and trace routes.
#[pyfunction]
fn ogata(phi1: Rows, phi2: Rows, s: f64) -> PyResult<(PyInequalityReport, f64)> {
    let p1 = PositiveFunctional::new(to_matrix(phi1)?).map_err(err)?;
    let p2 = PositiveFunctional::new(to_matrix(phi2)?).map_err(err)?;
    let r = inequalities::ogata_modular(&p1, &p2, s).map_err(err)?;
    Ok((r.report.into(), r.route_gap))
}

/// `f` is `"power"` (with exponent `s`), `"ratio"` for t/(1+t) or `"log1p"`.
#[pyfunction]
#[pyo3(signature = (a, b, f = "power", s = 0.5))]
fn hoa(a: Rows, b: Rows, f: &str, s: f64) -> PyResult<PyInequalityReport> {
    let kind = match f {
        "power" => MonotoneKind::Power(s),
        "ratio" => MonotoneKind::Ratio,
        "log1p" => MonotoneKind::Log1p,
        other => return Err(ModkitError::new_err(format!("unknown monotone function '{other}'"))),
    };
    let mf = MonotoneFunction::register(kind, &mut random::seeded_rng(0)).map_err(err)?;
    Ok(inequalities::hoa_generalized(&to_matrix(a)?, &to_matrix(b)?, &mf).map_err(err)?.into())
}

#[pyfunction]
fn phillips(a: Rows, b: Rows, t: f64) -> PyResult<PyInequalityReport> {
    Ok(inequalities::phillips(&to_matrix(a)?, &to_matrix(b)?, t).map_err(err)?.into())
}

/// Seeded campaign; returns the same fields as the CLI's JSON report.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, dim = 4, samples = 100, tol = modkit::campaign::DEFAULT_TOL))]
fn campaign<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    dim: usize,
    samples: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let mut config = CampaignConfig::new(seed, dim, samples);
    config.tol = tol;
    let r = py.detach(|| run_campaign(&config, suite)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("suite", r.suite)?;
    out.set_item("samples", r.samples)?;
    out.set_item("failures", r.failures)?;
    out.set_item("worst_slack", r.worst_slack)?;
    out.set_item("wall_time", r.wall_time)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "modkit")]
fn modkit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ModkitError", m.py().get_type::<ModkitError>())?;
    m.add_class::<PyBipartiteVector>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyInequalityReport>()?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(is_cyclic_separating, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_state, m)?)?;
    m.add_function(wrap_pyfunction!(relative_modular_operator, m)?)?;
    m.add_function(wrap_pyfunction!(relative_modular_from_s, m)?)?;
    m.add_function(wrap_pyfunction!(polar_residual, m)?)?;
    m.add_function(wrap_pyfunction!(modular_flow, m)?)?;
    m.add_function(wrap_pyfunction!(connes_cocycle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tomita_takesaki, m)?)?;
    m.add_function(wrap_pyfunction!(kms_function, m)?)?;
    m.add_function(wrap_pyfunction!(kms_boundary_value, m)?)?;
    m.add_function(wrap_pyfunction!(centralizer_basis, m)?)?;
    m.add_function(wrap_pyfunction!(cone_contains, m)?)?;
    m.add_function(wrap_pyfunction!(cone_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(norm_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(powers_stormer, m)?)?;
    m.add_function(wrap_pyfunction!(ozawa, m)?)?;
    m.add_function(wrap_pyfunction!(ogata, m)?)?;
    m.add_function(wrap_pyfunction!(hoa, m)?)?;
    m.add_function(wrap_pyfunction!(phillips, m)?)?;
    m.add_function(wrap_pyfunction!(campaign, m)?)?;
    Ok(())
}
